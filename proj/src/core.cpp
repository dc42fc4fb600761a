#include "fuzzy_spectra/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fuzzy {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Sphere: return "sphere";
    case SpaceKind::Madore: return "madore";
  }
  return "unknown";
}

SpaceKind parse_space_kind(const std::string& name) {
  if (name == "circle") return SpaceKind::Circle;
  if (name == "sphere") return SpaceKind::Sphere;
  if (name == "madore") return SpaceKind::Madore;
  throw std::invalid_argument("unknown space '" + name + "' (expected circle, sphere or madore)");
}

double k_floor(int lambda) {
  const double l = lambda;
  return l * l * (l + 1.0) * (l + 1.0);
}

double FuzzyParams::k() const {
  if (!k_) throw std::logic_error("the Madore fuzzy sphere has no stiffness k");
  return *k_;
}

FuzzyParams make_params(int lambda, std::optional<double> k, SpaceKind kind) {
  if (lambda < 1) throw std::invalid_argument("cutoff lambda must be >= 1");
  if (kind == SpaceKind::Madore) {
    if (k) throw std::invalid_argument("k must be absent for the Madore fuzzy sphere");
    return FuzzyParams(lambda, std::nullopt, kind);
  }
  const double floor = k_floor(lambda);
  if (!k) return FuzzyParams(lambda, floor, kind);
  if (!std::isfinite(*k) || *k < floor) {
    std::ostringstream msg;
    msg << "k = " << *k << " violates k >= lambda^2 (lambda+1)^2 = " << floor
        << " for lambda = " << lambda;
    throw std::invalid_argument(msg.str());
  }
  return FuzzyParams(lambda, *k, kind);
}

SymTridiag::SymTridiag(std::vector<double> diag, std::vector<double> offdiag)
    : diag_(std::move(diag)), off_(std::move(offdiag)) {
  if (diag_.empty()) throw std::invalid_argument("SymTridiag needs order >= 1");
  if (off_.size() + 1 != diag_.size())
    throw std::invalid_argument("SymTridiag off-diagonal must have length n-1");
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(diag_.begin(), diag_.end(), finite) ||
      !std::all_of(off_.begin(), off_.end(), finite))
    throw std::invalid_argument("SymTridiag entries must be finite");
}

SymTridiag SymTridiag::toeplitz(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("Toeplitz order must be >= 1");
  return SymTridiag(std::vector<double>(n, a), std::vector<double>(n - 1, b));
}

SymTridiag SymTridiag::leading(std::size_t order) const {
  if (order < 1 || order > size())
    throw std::invalid_argument("leading submatrix order out of range");
  return SymTridiag(std::vector<double>(diag_.begin(), diag_.begin() + order),
                    std::vector<double>(off_.begin(), off_.begin() + (order - 1)));
}

Eigen::MatrixXd SymTridiag::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag_[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off_[i];
  return m;
}

std::vector<BasisLabel> circle_basis(int lambda) {
  std::vector<BasisLabel> basis;
  basis.reserve(2 * lambda + 1);
  for (int n = lambda; n >= -lambda; --n) basis.push_back({n, std::nullopt});
  return basis;
}

std::vector<BasisLabel> sphere_basis(int lambda) {
  std::vector<BasisLabel> basis;
  basis.reserve(static_cast<std::size_t>(lambda + 1) * (lambda + 1));
  for (int m = -lambda; m <= lambda; ++m)
    for (int l = std::abs(m); l <= lambda; ++l) basis.push_back({m, l});
  return basis;
}

std::size_t sphere_block_offset(int lambda, int m) {
  // blocks -lambda..m-1 have sizes lambda-|j|+1
  std::size_t offset = 0;
  for (int j = -lambda; j < m; ++j) offset += lambda - std::abs(j) + 1;
  return offset;
}

std::size_t sphere_index(int lambda, int l, int m) {
  if (std::abs(m) > l || l > lambda) throw std::out_of_range("sphere label out of range");
  return sphere_block_offset(lambda, m) + (l - std::abs(m));
}

OperatorRep::OperatorRep(std::vector<BasisLabel> basis, SparseMatrix entries)
    : basis_(std::move(basis)), entries_(std::move(entries)) {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  if (entries_.rows() != n || entries_.cols() != n)
    throw std::invalid_argument("operator matrix must be square with the basis dimension");
  entries_.makeCompressed();
}

OperatorRep OperatorRep::adjoint() const {
  return OperatorRep(basis_, SparseMatrix(entries_.adjoint()));
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end(), std::greater<>());
  min_gap_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < values_.size(); ++i)
    min_gap_ = std::min(min_gap_, values_[i] - values_[i + 1]);
}

StateVector StateVector::normalize(Eigen::VectorXcd v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  v /= norm;
  return {std::move(v), true};
}

StateVector StateVector::from_real(const Eigen::VectorXd& v, bool normalize_it) {
  Eigen::VectorXcd c = v.cast<cplx>();
  if (normalize_it) return normalize(std::move(c));
  return {std::move(c), false};
}

double spectral_norm(const SymTridiag& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  if (n == 1) return std::abs(m.diag()[0]);
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(m.diag().data(), n);
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(m.offdiag().data(), n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("tridiagonal QL iteration failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_norm(const DenseMatrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("spectral_norm: non-finite entries");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues()(0);
}

double spectral_norm(const OperatorRep& m) { return spectral_norm(m.dense()); }

bool entrywise_dominates(const SymTridiag& a, const SymTridiag& b) {
  if (a.size() != b.size()) throw std::invalid_argument("entrywise_dominates: order mismatch");
  auto nonneg = [](std::span<const double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return x >= 0.0; });
  };
  if (!nonneg(a.diag()) || !nonneg(a.offdiag()) || !nonneg(b.diag()) || !nonneg(b.offdiag()))
    throw std::invalid_argument("entrywise_dominates: entries must be nonnegative");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.diag()[i] > b.diag()[i]) return false;
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (a.offdiag()[i] > b.offdiag()[i]) return false;
  return true;
}

}  // namespace fuzzy
