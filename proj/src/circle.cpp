#include "fuzzy_spectra/circle.hpp"

#include <cmath>

#include "operator_util.hpp"

namespace fuzzy {
namespace {

void require_circle(const FuzzyParams& p, const char* op) {
  if (p.kind() != SpaceKind::Circle)
    throw std::invalid_argument(std::string(op) + " requires circle parameters");
}

// Basis position of psi_n: descending n.
int pos(int lambda, int n) { return lambda - n; }

}  // namespace

double CircleCoefficients::b(int n) const {
  if (n < -lambda_ || n > lambda_ + 1) return 0.0;
  return values_[n + lambda_];
}

CircleCoefficients circle_coefficients(const FuzzyParams& p) {
  require_circle(p, "circle_coefficients");
  const int lambda = p.lambda();
  const double k = p.k();
  std::vector<double> values(2 * lambda + 2, 0.0);
  for (int n = 1 - lambda; n <= lambda; ++n)
    values[n + lambda] = std::sqrt(1.0 + static_cast<double>(n) * (n - 1) / k);
  return CircleCoefficients(lambda, std::move(values));
}

SymTridiag build_x1(const FuzzyParams& p) {
  require_circle(p, "build_x1");
  const auto coeff = circle_coefficients(p);
  const int lambda = p.lambda();
  std::vector<double> off;
  off.reserve(2 * lambda);
  // row psi_n couples to psi_{n-1} through b_n / 2
  for (int n = lambda; n >= 1 - lambda; --n) off.push_back(coeff.b(n) / 2.0);
  return SymTridiag(std::vector<double>(2 * lambda + 1, 0.0), std::move(off));
}

CircleOperators build_circle_operators(const FuzzyParams& p) {
  require_circle(p, "build_circle_operators");
  const int lambda = p.lambda();
  const auto coeff = circle_coefficients(p);
  const std::size_t dim = 2 * lambda + 1;

  std::vector<Eigen::Triplet<cplx>> plus, minus;
  for (int n = -lambda; n <= lambda; ++n) {
    // x_+ psi_n = b_{n+1} psi_{n+1}
    if (n + 1 <= lambda && coeff.b(n + 1) != 0.0)
      plus.emplace_back(pos(lambda, n + 1), pos(lambda, n), coeff.b(n + 1));
    // x_- psi_n = b_n psi_{n-1}
    if (n - 1 >= -lambda && coeff.b(n) != 0.0)
      minus.emplace_back(pos(lambda, n - 1), pos(lambda, n), coeff.b(n));
  }
  const auto basis = circle_basis(lambda);
  auto L = detail::diagonal(dim, [&](std::size_t i) { return cplx(basis[i].m); });
  return {OperatorRep(basis, detail::from_triplets(dim, plus)),
          OperatorRep(basis, detail::from_triplets(dim, minus)), OperatorRep(basis, L)};
}

std::vector<OperatorRep> circle_coordinates(const FuzzyParams& p) {
  const auto ops = build_circle_operators(p);
  const SparseMatrix& xp = ops.x_plus.entries();
  const SparseMatrix& xm = ops.x_minus.entries();
  SparseMatrix x1 = (xp + xm) * cplx(0.5);
  SparseMatrix x2 = (xp - xm) * cplx(0.0, -0.5);
  return {OperatorRep(ops.L.basis(), x1), OperatorRep(ops.L.basis(), x2)};
}

std::map<std::string, double> circle_algebra_residuals(const FuzzyParams& p) {
  require_circle(p, "circle_algebra_residuals");
  const int lambda = p.lambda();
  const double k = p.k();
  const auto ops = build_circle_operators(p);
  const SparseMatrix& xp = ops.x_plus.entries();
  const SparseMatrix& xm = ops.x_minus.entries();
  const SparseMatrix& L = ops.L.entries();
  const std::size_t dim = ops.L.dim();
  const SparseMatrix I = detail::identity(dim);

  const auto& basis = ops.L.basis();
  const SparseMatrix P_top = detail::diagonal(dim, [&](std::size_t i) {
    return cplx(basis[i].m == lambda ? 1.0 : 0.0);
  });
  const SparseMatrix P_bottom = detail::diagonal(dim, [&](std::size_t i) {
    return cplx(basis[i].m == -lambda ? 1.0 : 0.0);
  });
  const double edge = 1.0 + lambda * (lambda + 1.0) / k;

  std::map<std::string, double> r;
  r["L_x_plus"] = detail::norm_of(SparseMatrix(detail::commutator(L, xp) - xp));
  r["L_x_minus"] = detail::norm_of(SparseMatrix(detail::commutator(L, xm) + xm));
  r["x_plus_adjoint"] = detail::norm_of(SparseMatrix(SparseMatrix(xp.adjoint()) - xm));
  r["L_hermitian"] = detail::norm_of(SparseMatrix(SparseMatrix(L.adjoint()) - L));
  r["x_plus_x_minus"] = detail::norm_of(SparseMatrix(
      detail::commutator(xp, xm) + L * cplx(2.0 / k) - (P_top - P_bottom) * cplx(edge)));

  const SparseMatrix x_sq = (xp * xm + xm * xp) * cplx(0.5);
  const SparseMatrix L_sq = L * L;
  r["x_squared"] = detail::norm_of(
      SparseMatrix(x_sq - I - L_sq * cplx(1.0 / k) + (P_top + P_bottom) * cplx(edge / 2.0)));

  SparseMatrix poly = I;
  for (int m = -lambda; m <= lambda; ++m) poly = SparseMatrix(poly * (L - I * cplx(m)));
  r["L_minimal_polynomial"] = detail::norm_of(poly);

  r["x_plus_nilpotent"] = detail::norm_of(detail::power(xp, 2 * lambda + 1));
  r["x_minus_nilpotent"] = detail::norm_of(detail::power(xm, 2 * lambda + 1));
  return r;
}

}  // namespace fuzzy
