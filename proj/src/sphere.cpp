#include "fuzzy_spectra/sphere.hpp"

#include <array>
#include <cmath>

#include "operator_util.hpp"

namespace fuzzy {
namespace {

constexpr double kResidualTol = 1e-10;

void require_sphere(const FuzzyParams& p, const char* op) {
  if (p.kind() != SpaceKind::Sphere)
    throw std::invalid_argument(std::string(op) + " requires sphere parameters");
}

double safe_sqrt(double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }

int levi_civita(int i, int j, int h) {
  // 0-based indices
  if (i == j || j == h || i == h) return 0;
  return ((i + 1) % 3 == j) ? 1 : -1;
}

}  // namespace

std::size_t SphereCoefficients::table_index(Component a, int l, int m) const {
  const std::size_t per_table = static_cast<std::size_t>(lambda_ + 2) * (lambda_ + 2);
  const std::size_t which = a == Component::Zero ? 0 : (a == Component::Plus ? 1 : 2);
  return which * per_table + slot(l, m);
}

double SphereCoefficients::c(int l) const {
  if (l < 0 || l > lambda_ + 1) return 0.0;
  return c_[l];
}

double SphereCoefficients::A(Component a, int l, int m) const {
  if (l < 0 || l > lambda_ + 1 || std::abs(m) > l) return 0.0;
  return a_[table_index(a, l, m)];
}

double SphereCoefficients::B(Component a, int l, int m) const {
  if (l < 0 || l > lambda_ + 1 || std::abs(m) > l) return 0.0;
  return b_[table_index(a, l, m)];
}

SphereCoefficients sphere_coefficients(const FuzzyParams& p) {
  require_sphere(p, "sphere_coefficients");
  SphereCoefficients s;
  s.lambda_ = p.lambda();
  s.k_ = p.k();
  const int top = s.lambda_ + 1;

  s.c_.assign(top + 1, 0.0);
  for (int l = 1; l <= s.lambda_; ++l) s.c_[l] = std::sqrt(1.0 + static_cast<double>(l) * l / s.k_);

  const std::size_t per_table = static_cast<std::size_t>(top + 1) * (top + 1);
  s.a_.assign(3 * per_table, 0.0);
  s.b_.assign(3 * per_table, 0.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int l = 0; l <= top; ++l) {
    for (int m = -l; m <= l; ++m) {
      if (l >= 1) {
        const double den = (2.0 * l + 1.0) * (2.0 * l - 1.0);
        s.a_[s.table_index(Component::Zero, l, m)] = safe_sqrt(double((l + m) * (l - m)) / den);
        s.a_[s.table_index(Component::Plus, l, m)] =
            inv_sqrt2 * safe_sqrt(double((l - m) * (l - m - 1)) / den);
        s.a_[s.table_index(Component::Minus, l, m)] =
            -inv_sqrt2 * safe_sqrt(double((l + m) * (l + m - 1)) / den);
      }
      const double den = (2.0 * l + 1.0) * (2.0 * l + 3.0);
      s.b_[s.table_index(Component::Zero, l, m)] =
          safe_sqrt(double((l + m + 1) * (l - m + 1)) / den);
      s.b_[s.table_index(Component::Plus, l, m)] =
          -inv_sqrt2 * safe_sqrt(double((l + m + 1) * (l + m + 2)) / den);
      s.b_[s.table_index(Component::Minus, l, m)] =
          inv_sqrt2 * safe_sqrt(double((l - m + 1) * (l - m + 2)) / den);
    }
  }
  return s;
}

SymTridiag build_Bm(const FuzzyParams& p, int m) {
  require_sphere(p, "build_Bm");
  return build_Bm(sphere_coefficients(p), m);
}

SymTridiag build_Bm(const SphereCoefficients& s, int m) {
  const int lambda = s.lambda();
  if (std::abs(m) > lambda) throw std::invalid_argument("build_Bm: |m| must not exceed lambda");
  const int am = std::abs(m);
  std::vector<double> off;
  off.reserve(lambda - am);
  for (int l = am + 1; l <= lambda; ++l) off.push_back(s.c(l) * s.A0(l, m));
  return SymTridiag(std::vector<double>(lambda - am + 1, 0.0), std::move(off));
}

BlockFamily build_block_family(const FuzzyParams& p) {
  BlockFamily family;
  require_sphere(p, "build_block_family");
  const auto s = sphere_coefficients(p);
  for (int m = -p.lambda(); m <= p.lambda(); ++m) family.blocks.emplace(m, build_Bm(s, m));
  return family;
}

SphereOperators build_sphere_operators(const FuzzyParams& p) {
  require_sphere(p, "build_sphere_operators");
  const int lambda = p.lambda();
  const auto s = sphere_coefficients(p);
  const auto basis = sphere_basis(lambda);
  const std::size_t dim = basis.size();

  using Triplets = std::vector<Eigen::Triplet<cplx>>;
  std::array<Triplets, 3> x;  // indexed by component + 1: minus, zero, plus
  Triplets lp, lm;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  for (std::size_t col = 0; col < dim; ++col) {
    const int m = basis[col].m;
    const int l = *basis[col].l;
    for (Component a : {Component::Minus, Component::Zero, Component::Plus}) {
      const int target_m = m + static_cast<int>(a);
      auto& out = x[static_cast<int>(a) + 1];
      if (l - 1 >= std::abs(target_m)) {
        const double v = s.c(l) * s.A(a, l, m);
        if (v != 0.0) out.emplace_back(sphere_index(lambda, l - 1, target_m), col, v);
      }
      if (l + 1 <= lambda && std::abs(target_m) <= l + 1) {
        const double v = s.c(l + 1) * s.B(a, l, m);
        if (v != 0.0) out.emplace_back(sphere_index(lambda, l + 1, target_m), col, v);
      }
    }
    if (m + 1 <= l)
      lp.emplace_back(sphere_index(lambda, l, m + 1), col,
                      inv_sqrt2 * std::sqrt(double((l - m) * (l + m + 1))));
    if (m - 1 >= -l)
      lm.emplace_back(sphere_index(lambda, l, m - 1), col,
                      inv_sqrt2 * std::sqrt(double((l + m) * (l - m + 1))));
  }

  auto op = [&](const Triplets& t) { return OperatorRep(basis, detail::from_triplets(dim, t)); };
  auto L3 = detail::diagonal(dim, [&](std::size_t i) { return cplx(basis[i].m); });
  auto Lsq = detail::diagonal(dim, [&](std::size_t i) {
    const int l = *basis[i].l;
    return cplx(double(l) * (l + 1));
  });
  return {op(x[1]), op(x[2]), op(x[0]),
          OperatorRep(basis, L3), op(lp), op(lm), OperatorRep(basis, Lsq)};
}

namespace {

std::vector<OperatorRep> cartesian(const OperatorRep& plus, const OperatorRep& minus,
                                   const OperatorRep& zero) {
  const double s = 1.0 / std::sqrt(2.0);
  SparseMatrix c1 = (plus.entries() + minus.entries()) * cplx(s);
  SparseMatrix c2 = (plus.entries() - minus.entries()) * cplx(0.0, -s);
  return {OperatorRep(zero.basis(), c1), OperatorRep(zero.basis(), c2), zero};
}

SparseMatrix projector_on_l(const std::vector<BasisLabel>& basis, int l) {
  return detail::diagonal(basis.size(), [&](std::size_t i) {
    return cplx(*basis[i].l == l ? 1.0 : 0.0);
  });
}

struct Cartesian {
  std::array<SparseMatrix, 3> x;
  std::array<SparseMatrix, 3> L;
};

Cartesian cartesian_of(const SphereOperators& ops) {
  const auto xs = sphere_coordinates(ops);
  const auto ls = sphere_angular_momenta(ops);
  Cartesian c;
  for (int i = 0; i < 3; ++i) {
    c.x[i] = xs[i].entries();
    c.L[i] = ls[i].entries();
  }
  return c;
}

}  // namespace

std::vector<OperatorRep> sphere_coordinates(const SphereOperators& ops) {
  return cartesian(ops.x_plus, ops.x_minus, ops.x0);
}

std::vector<OperatorRep> sphere_angular_momenta(const SphereOperators& ops) {
  return cartesian(ops.L_plus, ops.L_minus, ops.L3);
}

double fit_commutator_K(const FuzzyParams& p, CoordinatePair pair) {
  require_sphere(p, "fit_commutator_K");
  if (pair.i < 1 || pair.i > 3 || pair.j < 1 || pair.j > 3 || pair.i == pair.j)
    throw std::invalid_argument("fit_commutator_K: need two distinct indices in 1..3");
  const int i = pair.i - 1, j = pair.j - 1, h = 3 - i - j;
  const double sign = levi_civita(i, j, h);
  const double k = p.k();

  const auto ops = build_sphere_operators(p);
  const Cartesian c = cartesian_of(ops);
  const SparseMatrix P = projector_on_l(ops.x0.basis(), p.lambda());

  const DenseMatrix C =
      DenseMatrix(detail::commutator(c.x[i], c.x[j])) + cplx(0.0, sign / k) * DenseMatrix(c.L[h]);
  const DenseMatrix Pd(P);
  const double support = spectral_norm(DenseMatrix(C - Pd * C * Pd));
  if (support > kResidualTol)
    throw AlgebraError("[x_i, x_j] + (i/k) eps L_h has support outside the l = Lambda block "
                       "(residual " + std::to_string(support) + ")");

  const DenseMatrix M = cplx(0.0, sign) * (Pd * DenseMatrix(c.L[h]) * Pd);
  const double mm = M.squaredNorm();
  if (mm == 0.0) throw AlgebraError("fit_commutator_K: P_Lambda L_h P_Lambda vanishes");
  const double K = (M.adjoint() * C).trace().real() / mm;
  const double fit = spectral_norm(DenseMatrix(C - K * M));
  if (fit > kResidualTol)
    throw AlgebraError("[x_i, x_j] + (i/k) eps L_h is not proportional to i P_Lambda L_h "
                       "(residual " + std::to_string(fit) + ")");
  return K;
}

std::map<std::string, double> sphere_algebra_residuals(const FuzzyParams& p) {
  require_sphere(p, "sphere_algebra_residuals");
  const int lambda = p.lambda();
  const double k = p.k();
  const auto ops = build_sphere_operators(p);
  const auto& basis = ops.x0.basis();
  const std::size_t dim = basis.size();
  const SparseMatrix I = detail::identity(dim);
  const Cartesian c = cartesian_of(ops);
  const SparseMatrix P_top = projector_on_l(basis, lambda);

  std::map<std::string, double> r;
  double lx = 0.0, ll = 0.0, herm = 0.0;
  for (int i = 0; i < 3; ++i) {
    herm = std::max(herm, detail::norm_of(SparseMatrix(SparseMatrix(c.x[i].adjoint()) - c.x[i])));
    herm = std::max(herm, detail::norm_of(SparseMatrix(SparseMatrix(c.L[i].adjoint()) - c.L[i])));
    for (int j = 0; j < 3; ++j) {
      SparseMatrix ex = detail::commutator(c.L[i], c.x[j]);
      SparseMatrix el = detail::commutator(c.L[i], c.L[j]);
      for (int h = 0; h < 3; ++h) {
        const int e = levi_civita(i, j, h);
        if (e == 0) continue;
        ex = SparseMatrix(ex - c.x[h] * cplx(0.0, e));
        el = SparseMatrix(el - c.L[h] * cplx(0.0, e));
      }
      lx = std::max(lx, detail::norm_of(ex));
      ll = std::max(ll, detail::norm_of(el));
    }
  }
  r["L_x_commutator"] = lx;
  r["L_L_commutator"] = ll;
  r["hermitian"] = herm;
  r["x_plus_adjoint"] = detail::norm_of(
      SparseMatrix(SparseMatrix(ops.x_plus.entries().adjoint()) - ops.x_minus.entries()));
  r["x0_L3_commutator"] = detail::norm_of(detail::commutator(ops.x0.entries(), ops.L3.entries()));

  SparseMatrix dot = c.x[0] * c.L[0] + c.x[1] * c.L[1] + c.x[2] * c.L[2];
  r["x_dot_L"] = detail::norm_of(dot);

  const double K = fit_commutator_K(p);
  double xx = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const int h = 3 - i - j;
      const SparseMatrix factor = I * cplx(-1.0 / k) + P_top * cplx(K);
      SparseMatrix e = detail::commutator(c.x[i], c.x[j]) -
                       SparseMatrix(factor * c.L[h]) * cplx(0.0, levi_civita(i, j, h));
      xx = std::max(xx, detail::norm_of(e));
    }
  r["x_x_commutator"] = xx;

  const SparseMatrix x_sq = c.x[0] * c.x[0] + c.x[1] * c.x[1] + c.x[2] * c.x[2];
  const double edge = (1.0 + (lambda + 1.0) * (lambda + 1.0) / k) * (lambda + 1.0) / (2.0 * lambda + 1.0);
  r["x_squared"] = detail::norm_of(SparseMatrix(
      x_sq - I - (ops.Lsq.entries() + I) * cplx(1.0 / k) + P_top * cplx(edge)));

  SparseMatrix poly = I;
  for (int l = 0; l <= lambda; ++l)
    poly = SparseMatrix(poly * (ops.Lsq.entries() - I * cplx(double(l) * (l + 1))));
  r["Lsq_minimal_polynomial"] = detail::norm_of(poly);

  double l3poly = 0.0;
  for (int l = 0; l <= lambda; ++l) {
    SparseMatrix q = I;
    for (int m = -l; m <= l; ++m) q = SparseMatrix(q * (ops.L3.entries() - I * cplx(m)));
    l3poly = std::max(l3poly, detail::norm_of(SparseMatrix(q * projector_on_l(basis, l))));
  }
  r["L3_minimal_polynomial"] = l3poly;

  r["x_plus_nilpotent"] = detail::norm_of(detail::power(ops.x_plus.entries(), 2 * lambda + 1));
  r["x_minus_nilpotent"] = detail::norm_of(detail::power(ops.x_minus.entries(), 2 * lambda + 1));
  return r;
}

bool coefficient_inequality_check(const FuzzyParams& p) {
  const auto s = sphere_coefficients(p);
  const int lambda = p.lambda();
  for (int m = 1; m <= lambda; ++m)
    for (int l = m; l <= lambda; ++l)
      if (!(s.c(l) * s.A0(l, m - 1) > s.c(l + 1) * s.A0(l + 1, m))) return false;
  return true;
}

}  // namespace fuzzy
