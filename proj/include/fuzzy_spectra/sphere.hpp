#pragma once

#include <map>
#include <string>
#include <vector>

#include "fuzzy_spectra/core.hpp"

namespace fuzzy {

/// Index of a spherical component: x_0, x_+ or x_-.
enum class Component : int { Zero = 0, Plus = 1, Minus = -1 };

/// c_l and the Clebsch-type tables A_l^{a,m}, B_l^{a,m} of the fuzzy sphere.
///
/// A is stored from its closed form. B is stored from its own closed form
///   B_l^{0,m} = sqrt((l+m+1)(l-m+1) / ((2l+1)(2l+3)))
///   B_l^{+-,m} = -+(1/sqrt2) sqrt((l+-m+1)(l+-m+2) / ((2l+1)(2l+3)))
/// rather than through A_l^{a,m} = B_{l-1}^{-a,m-a}, so the mirror identity
/// remains a real check. Lookups outside |m| <= l return zero.
class SphereCoefficients {
 public:
  int lambda() const { return lambda_; }
  double k() const { return k_; }

  /// c_0 = c_{Lambda+1} = 0, c_l = sqrt(1 + l^2/k) otherwise.
  double c(int l) const;
  double A(Component a, int l, int m) const;
  double B(Component a, int l, int m) const;
  double A0(int l, int m) const { return A(Component::Zero, l, m); }

  friend SphereCoefficients sphere_coefficients(const FuzzyParams& p);

 private:
  static std::size_t slot(int l, int m) { return static_cast<std::size_t>(l * l + (m + l)); }
  std::size_t table_index(Component a, int l, int m) const;

  int lambda_ = 0;
  double k_ = 0.0;
  std::vector<double> c_;
  std::vector<double> a_;  // three tables of (lambda+2)^2 entries each
  std::vector<double> b_;
};

/// x_0 restricted to L_3 = m, one block per m.
struct BlockFamily {
  std::map<int, SymTridiag> blocks;
};

struct SphereOperators {
  OperatorRep x0, x_plus, x_minus;
  OperatorRep L3, L_plus, L_minus;
  OperatorRep Lsq;
};

SphereCoefficients sphere_coefficients(const FuzzyParams& p);

/// B_m(Lambda): order Lambda-|m|+1, zero diagonal, off-diagonal
/// c_l A_l^{0,m} for l = |m|+1 .. Lambda.
SymTridiag build_Bm(const FuzzyParams& p, int m);
SymTridiag build_Bm(const SphereCoefficients& s, int m);
BlockFamily build_block_family(const FuzzyParams& p);

SphereOperators build_sphere_operators(const FuzzyParams& p);

/// Hermitean Cartesian components, in order (x_1, x_2, x_3) or (L_1, L_2,
/// L_3), reconstructed from x_+- = (x_1 +- i x_2)/sqrt2.
std::vector<OperatorRep> sphere_coordinates(const SphereOperators& ops);
std::vector<OperatorRep> sphere_angular_momenta(const SphereOperators& ops);

/// Spectral-norm residuals of the O(3)-equivariant relations, keyed by name.
/// Dense products are involved; intended for Lambda up to about 8.
std::map<std::string, double> sphere_algebra_residuals(const FuzzyParams& p);

/// Pair (i, j) of Cartesian indices, 1-based.
struct CoordinatePair {
  int i = 1;
  int j = 2;
};

/// Fits the scalar K in [x_i, x_j] = i eps_ijh (-1/k + K P_Lambda) L_h.
///
/// Forms C = [x_i, x_j] + (i/k) eps_ijh L_h, checks that C lives on the
/// l = Lambda block and is proportional to i P_Lambda L_h P_Lambda, and
/// returns the least-squares constant. Throws AlgebraError if either check
/// exceeds 1e-10.
double fit_commutator_K(const FuzzyParams& p, CoordinatePair pair = {});

/// c_l A_l^{0,m-1} > c_{l+1} A_{l+1}^{0,m} for 1 <= m <= Lambda, m <= l <= Lambda.
bool coefficient_inequality_check(const FuzzyParams& p);

}  // namespace fuzzy
