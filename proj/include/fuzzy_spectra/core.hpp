#pragma once

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fuzzy {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Raised when an iterative routine exhausts its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operator identity fails structurally (not just by rounding).
class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SpaceKind { Circle, Sphere, Madore };

std::string to_string(SpaceKind kind);
SpaceKind parse_space_kind(const std::string& name);

/// Smallest admissible stiffness for cutoff `lambda`: lambda^2 (lambda+1)^2.
double k_floor(int lambda);

/// Cutoff, potential stiffness and space kind. Every coefficient in the
/// library is derived from one of these.
class FuzzyParams {
 public:
  int lambda() const { return lambda_; }
  SpaceKind kind() const { return kind_; }
  bool has_k() const { return k_.has_value(); }
  /// Throws std::logic_error for the Madore sphere, which has no stiffness.
  double k() const;

  friend FuzzyParams make_params(int lambda, std::optional<double> k, SpaceKind kind);

 private:
  FuzzyParams(int lambda, std::optional<double> k, SpaceKind kind)
      : lambda_(lambda), k_(k), kind_(kind) {}

  int lambda_;
  std::optional<double> k_;
  SpaceKind kind_;
};

/// Validates and builds parameters. For circle and sphere `k` defaults to
/// k_floor(lambda) and must not be smaller than it; for Madore it must be
/// absent.
FuzzyParams make_params(int lambda, std::optional<double> k, SpaceKind kind);

/// Real symmetric tridiagonal matrix stored as its diagonal and its single
/// off-diagonal.
class SymTridiag {
 public:
  SymTridiag(std::vector<double> diag, std::vector<double> offdiag);

  /// P_n(a, b, b).
  static SymTridiag toeplitz(int n, double a, double b);

  std::size_t size() const { return diag_.size(); }
  std::span<const double> diag() const { return diag_; }
  std::span<const double> offdiag() const { return off_; }

  /// Leading principal submatrix of the given order.
  SymTridiag leading(std::size_t order) const;
  Eigen::MatrixXd dense() const;

  bool operator==(const SymTridiag&) const = default;

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
};

/// Label of a basis vector. Circle and Madore states carry only `m` (the
/// eigenvalue of L or L3); sphere states also carry the angular momentum `l`.
struct BasisLabel {
  int m = 0;
  std::optional<int> l;

  bool operator==(const BasisLabel&) const = default;
};

/// psi_Lambda, ..., psi_{-Lambda}. Also used for the Madore sphere.
std::vector<BasisLabel> circle_basis(int lambda);

/// (m, l) lexicographic: m from -Lambda to Lambda, l from |m| to Lambda, so
/// every fixed-m block is contiguous.
std::vector<BasisLabel> sphere_basis(int lambda);

/// Offset of the first state of block m in sphere_basis(lambda).
std::size_t sphere_block_offset(int lambda, int m);
std::size_t sphere_index(int lambda, int l, int m);

/// Complex operator over a labeled orthonormal basis. Storage is sparse so
/// that the sphere operators stay usable at large cutoffs; `dense()` gives
/// the full matrix for algebra checks.
class OperatorRep {
 public:
  OperatorRep(std::vector<BasisLabel> basis, SparseMatrix entries);

  const std::vector<BasisLabel>& basis() const { return basis_; }
  const SparseMatrix& entries() const { return entries_; }
  std::size_t dim() const { return basis_.size(); }
  DenseMatrix dense() const { return DenseMatrix(entries_); }
  OperatorRep adjoint() const;

 private:
  std::vector<BasisLabel> basis_;
  SparseMatrix entries_;
};

/// Eigenvalues sorted descending, with the smallest gap between neighbours.
class Spectrum {
 public:
  Spectrum() = default;
  /// Sorts `values` descending.
  explicit Spectrum(std::vector<double> values);

  const std::vector<double>& values() const& { return values_; }
  std::vector<double> values() && { return std::move(values_); }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double top() const { return values_.front(); }
  /// +inf for fewer than two values.
  double min_gap() const { return min_gap_; }
  bool is_simple(double tol) const { return min_gap_ > tol; }

 private:
  std::vector<double> values_;
  double min_gap_ = 0.0;
};

struct StateVector {
  Eigen::VectorXcd coefficients;
  bool normalized = false;

  static StateVector normalize(Eigen::VectorXcd v);
  static StateVector from_real(const Eigen::VectorXd& v, bool normalize_it = true);
};

/// Largest singular value; for a symmetric tridiagonal this is the spectral
/// radius, computed with Eigen's QL iteration (independent of the bisection
/// solver).
double spectral_norm(const SymTridiag& m);
double spectral_norm(const OperatorRep& m);
double spectral_norm(const DenseMatrix& m);

/// True iff every entry of `a` is <= the matching entry of `b`. Both must be
/// entrywise nonnegative and of equal order.
bool entrywise_dominates(const SymTridiag& a, const SymTridiag& b);

}  // namespace fuzzy
