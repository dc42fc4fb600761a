#pragma once

#include <vector>

#include "fuzzy_spectra/core.hpp"

namespace fuzzy {

/// Sturm sequence of T - xI in scaled form.
///
/// The leading principal minors obey p_h = (d_h - x) p_{h-1} - e_{h-1}^2 p_{h-2};
/// they overflow quickly, so the ratios q_h = p_h / p_{h-1} are stored
/// instead. The number of negative ratios equals the number of sign
/// disagreements of the raw sequence, i.e. the number of eigenvalues below x.
struct SturmSequence {
  double x = 0.0;
  std::vector<double> ratios;
  std::size_t count = 0;

  static SturmSequence evaluate(const SymTridiag& t, double x);
};

struct Eigenpair {
  double value = 0.0;
  StateVector vector;
  double residual = 0.0;  // ||T v - value v||
};

/// Eigenvalues a + 2 sqrt(bc) cos(h pi / (n+1)), h = 1..n. Rejects bc < 0.
Spectrum toeplitz_eigs(int n, double a, double b, double c);

/// Eigenvector h of P_n(a, b, c): components (c/b)^(k/2) sin(h k pi/(n+1)),
/// k = 1..n. Requires bc > 0.
StateVector toeplitz_eigvec(int n, int h, double b, double c, bool normalize = true);

/// Number of eigenvalues of `t` strictly below x.
std::size_t sturm_count(const SymTridiag& t, double x);

/// Gershgorin interval max|d| + 2 max|e| around zero.
double gershgorin_radius(const SymTridiag& t);

/// All eigenvalues by bisection on sturm_count, each refined to a bracket of
/// width <= tol (or to floating-point resolution), returned descending.
Spectrum eigen_all(const SymTridiag& t, double tol);

/// The largest eigenvalue only, by the same bisection.
double eigen_top(const SymTridiag& t, double tol);

/// Eigenvector for an eigenvalue estimate, by inverse iteration. The
/// returned value is the Rayleigh quotient; the first component with
/// magnitude above 1e-10 is made positive. Throws ConvergenceError if the
/// residual does not reach 1e-10 max(1, ||T||) within the iteration budget.
Eigenpair eigenvector_of(const SymTridiag& t, double lambda);

}  // namespace fuzzy
