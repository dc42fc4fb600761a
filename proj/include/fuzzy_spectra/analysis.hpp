#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fuzzy_spectra/core.hpp"

namespace fuzzy {

/// Solver tolerance used by every sweep.
inline constexpr double kSweepTol = 1e-14;
/// Absolute slack for comparisons against closed-form bounds.
inline constexpr double kCompareTol = 1e-12;

/// How the stiffness k is chosen for each cutoff in a sweep.
struct KRule {
  enum class Kind {
    Floor,            // lambda^2 (lambda+1)^2
    CircleGrowth,     // lambda(lambda-1)(2lambda+3)^2(2lambda+4)^4 / (4 pi^4)
    CircleGrowthAlt,  // lambda(lambda-1)(2lambda+2)^2(2lambda+3)^2(2lambda+2)^4 / (4 pi^4)
    Lambda6,          // lambda^6
    Explicit,         // fixed value
  };
  Kind kind = Kind::Floor;
  double value = 0.0;

  /// Never below k_floor(lambda): the growth rules vanish at lambda = 1.
  double operator()(int lambda) const;
  std::string name() const;
  static KRule parse(const std::string& name);
};

/// Piecewise-linear, odd, increasing map from reference (Toeplitz)
/// eigenvalues to actual eigenvalues, flat beyond the extreme knots.
class SpectralMap {
 public:
  /// Knots (reference, actual), ascending in reference.
  explicit SpectralMap(std::vector<std::pair<double, double>> knots);

  double operator()(double x) const;
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_;
};

/// Both spectra must be simple, equally sized and parity symmetric.
SpectralMap build_spectral_map(const Spectrum& reference, const Spectrum& actual);

/// True iff every value has its negative in the spectrum within tol.
bool parity_check(const Spectrum& s, double tol);

/// Interlacing of `outer` with its leading principal submatrix of order n-1.
bool interlacing_check(const SymTridiag& outer);

struct DensityMetrics {
  double sup_dev = 0.0;       // max over knots |G(ref_i) - ref_i|
  double max_gap = 0.0;       // largest gap between consecutive actual eigenvalues
  double hw_bound_lhs = 0.0;  // sqrt(sum (actual_i - ref_i)^2)
  double hw_bound_rhs = 0.0;  // closed-form cap on the perturbation
  double max_abs_dev = 0.0;   // max_i |actual_i - ref_i|
  int reference_size = 0;
};

/// Compares X^Lambda (circle) or B_m(Lambda) (sphere) against the Toeplitz
/// matrix P_n(0, 1/2, 1/2) of the same order.
DensityMetrics density_metrics(const FuzzyParams& p, int m = 0);

/// Sum_i <x_i^2> - Sum_i <x_i>^2 on a normalized state.
double dispersion(std::span<const OperatorRep> x_ops, const StateVector& state);

struct Localization {
  StateVector state;          // in the full basis of the space
  double top_eigenvalue = 0.0;
  double dispersion = 0.0;
  double L_expectation = 0.0;  // <L> on the circle, <L_3> otherwise
};

/// Top eigenvector of x_1 (circle) or x_3 (sphere, Madore), its dispersion
/// and angular momentum.
Localization most_localized(const FuzzyParams& p);

struct MadoreOperators {
  std::vector<OperatorRep> x;  // x^1, x^2, x^3 = 2 L_i / sqrt(n^2 - 1)
  OperatorRep L3;
};

/// Spin-Lambda representation, basis phi_Lambda .. phi_{-Lambda}.
MadoreOperators build_madore_operators(const FuzzyParams& p);

/// {m / sqrt(Lambda^2 + Lambda) : m = -Lambda..Lambda}, descending.
Spectrum madore_spectrum(int lambda);

/// ||B_m|| < ||leading_{n(Lambda;m)}(B_{m-1})|| < ||B_{m-1}||.
struct NormChainLink {
  int m = 0;
  double block_norm = 0.0;
  double submatrix_norm = 0.0;
  double previous_norm = 0.0;
  bool pass = false;
};

/// One link per 1 <= m <= Lambda. When n(Lambda;m) = 1 both sides of the
/// first inequality are 1x1 zero matrices, so that link compares with <=.
std::vector<NormChainLink> norm_chain(const FuzzyParams& p);

struct ReportRow {
  int lambda = 0;
  std::vector<std::pair<std::string, double>> values;
  bool pass = false;
};

struct VerificationReport {
  std::string theorem;
  std::string index_name = "lambda";  // meaning of ReportRow::lambda
  int lambda_min = 0;
  int lambda_max = 0;
  std::string k_rule;
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<std::pair<std::string, std::string>> notes;

  bool passed() const;
};

/// Circle: sandwich cos(pi/(2L+2)) <= alpha_1 <= sqrt(1+L(L-1)/k) cos(pi/(2L+2)),
/// alpha_1 >= 1 - pi^2/(8(L+1)^2), and alpha_1(L+1) > alpha_1(L).
/// With check_step = false only the bounds are checked.
VerificationReport top_eig_monotonicity_circle(int lambda_max, const KRule& rule,
                                               int lambda_min = 1, bool check_step = true);

/// Sphere: alpha_1(L;m) strictly decreasing in m, the bounds
/// cos(pi/(L+2)) < alpha_1(L;0), alpha_1(L;0) >= 1 - pi^2/(2(L+2)^2) (L >= 2),
/// alpha_1(L;0)^2 <= 1 + (L(L+1)+1)/k, and alpha_1(L+1;0) > alpha_1(L;0) from
/// an empirically found lambda0 on (recorded in the notes).
VerificationReport top_eig_monotonicity_sphere(int lambda_max, const KRule& rule,
                                               int lambda_min = 1, bool check_m_chain = true,
                                               bool check_step = true);

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 means
/// FUZZY_SPECTRA_THREADS or hardware concurrency).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

/// Worker count from FUZZY_SPECTRA_THREADS (positive integer), else hardware.
unsigned default_thread_count();

}  // namespace fuzzy
