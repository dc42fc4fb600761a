#pragma once

#include <map>
#include <string>
#include <vector>

#include "fuzzy_spectra/core.hpp"

namespace fuzzy {

/// Matrix-element coefficients b_n of x_+ and x_- on the fuzzy circle,
/// stored for n in [-Lambda, Lambda+1]. b_n = sqrt(1 + n(n-1)/k) for
/// 1-Lambda <= n <= Lambda and zero at both ends.
class CircleCoefficients {
 public:
  CircleCoefficients(int lambda, std::vector<double> values)
      : lambda_(lambda), values_(std::move(values)) {}

  int lambda() const { return lambda_; }
  /// Zero outside the stored range as well.
  double b(int n) const;

 private:
  int lambda_;
  std::vector<double> values_;  // values_[n + lambda]
};

struct CircleOperators {
  OperatorRep x_plus;
  OperatorRep x_minus;
  OperatorRep L;
};

CircleCoefficients circle_coefficients(const FuzzyParams& p);

/// X^Lambda: the matrix of x_1 in the basis psi_Lambda..psi_{-Lambda}. Zero
/// diagonal, off-diagonal (b_Lambda, ..., b_{1-Lambda}) / 2.
SymTridiag build_x1(const FuzzyParams& p);

CircleOperators build_circle_operators(const FuzzyParams& p);

/// x_1 = (x_+ + x_-)/2 and x_2 = (x_+ - x_-)/(2i).
std::vector<OperatorRep> circle_coordinates(const FuzzyParams& p);

/// Spectral-norm residuals of the O(2)-equivariant relations, keyed by name.
/// Structural identities (nilpotency, hermiticity) report exactly zero when
/// they hold.
std::map<std::string, double> circle_algebra_residuals(const FuzzyParams& p);

}  // namespace fuzzy
