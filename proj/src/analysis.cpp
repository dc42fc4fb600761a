#include "fuzzy_spectra/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "fuzzy_spectra/circle.hpp"
#include "fuzzy_spectra/eigensolver.hpp"
#include "fuzzy_spectra/sphere.hpp"
#include "operator_util.hpp"

namespace fuzzy {
namespace {

constexpr double kPi = std::numbers::pi;

double pow_int(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

cplx expectation(const SparseMatrix& op, const Eigen::VectorXcd& v) {
  return v.dot(op * v);
}

}  // namespace

double KRule::operator()(int lambda) const {
  const double L = lambda;
  double k = 0.0;
  switch (kind) {
    case Kind::Floor:
      break;
    case Kind::CircleGrowth:
      k = L * (L - 1) * pow_int(2 * L + 3, 2) * pow_int(2 * L + 4, 4) / (4 * pow_int(kPi, 4));
      break;
    case Kind::CircleGrowthAlt:
      k = L * (L - 1) * pow_int(2 * L + 2, 2) * pow_int(2 * L + 3, 2) * pow_int(2 * L + 2, 4) /
          (4 * pow_int(kPi, 4));
      break;
    case Kind::Lambda6:
      k = pow_int(L, 6);
      break;
    case Kind::Explicit:
      k = value;
      break;
  }
  return std::max(k, k_floor(lambda));
}

std::string KRule::name() const {
  switch (kind) {
    case Kind::Floor: return "floor";
    case Kind::CircleGrowth: return "theorem1c";
    case Kind::CircleGrowthAlt: return "theorem1c-proof";
    case Kind::Lambda6: return "lambda6";
    case Kind::Explicit: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "explicit(%.17g)", value);
      return buf;
    }
  }
  return "floor";
}

KRule KRule::parse(const std::string& name) {
  if (name == "floor" || name == "default") return {Kind::Floor, 0.0};
  if (name == "theorem1c") return {Kind::CircleGrowth, 0.0};
  if (name == "theorem1c-proof") return {Kind::CircleGrowthAlt, 0.0};
  if (name == "lambda6") return {Kind::Lambda6, 0.0};
  throw std::invalid_argument("unknown k rule: " + name);
}

// ---------------------------------------------------------------- spectral map

SpectralMap::SpectralMap(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw std::invalid_argument("SpectralMap: no knots");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i].first > knots_[i - 1].first) || !(knots_[i].second > knots_[i - 1].second))
      throw std::invalid_argument("SpectralMap: knots must be strictly increasing");
}

double SpectralMap::operator()(double x) const {
  if (x <= knots_.front().first) return knots_.front().second;
  if (x >= knots_.back().first) return knots_.back().second;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                                   [](double v, const auto& k) { return v < k.first; });
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

SpectralMap build_spectral_map(const Spectrum& reference, const Spectrum& actual) {
  if (reference.size() != actual.size())
    throw std::invalid_argument("build_spectral_map: spectra differ in size");
  if (!reference.is_simple(0.0) || !actual.is_simple(0.0))
    throw std::invalid_argument("build_spectral_map: spectra must be simple");
  std::vector<std::pair<double, double>> knots;
  knots.reserve(reference.size());
  for (std::size_t i = reference.size(); i-- > 0;) knots.emplace_back(reference[i], actual[i]);
  return SpectralMap(std::move(knots));
}

bool parity_check(const Spectrum& s, double tol) {
  // Descending order pairs the i-th value with the i-th from the end.
  const auto& v = s.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i] + v[v.size() - 1 - i]) > tol) return false;
  return true;
}

bool interlacing_check(const SymTridiag& outer) {
  if (outer.size() < 2) throw std::invalid_argument("interlacing_check: order must be >= 2");
  const Spectrum big = eigen_all(outer, kSweepTol);
  const Spectrum small = eigen_all(outer.leading(outer.size() - 1), kSweepTol);
  for (std::size_t i = 0; i < small.size(); ++i)
    if (!(big[i] + kCompareTol >= small[i] && small[i] >= big[i + 1] - kCompareTol)) return false;
  return true;
}

// ---------------------------------------------------------------- density

DensityMetrics density_metrics(const FuzzyParams& p, int m) {
  SymTridiag t = [&] {
    switch (p.kind()) {
      case SpaceKind::Circle: return build_x1(p);
      case SpaceKind::Sphere: return build_Bm(p, m);
      case SpaceKind::Madore: break;
    }
    throw std::invalid_argument("density_metrics: not defined for the Madore sphere");
  }();
  const int n = static_cast<int>(t.size());
  const Spectrum actual = eigen_all(t, kSweepTol);
  const Spectrum reference = toeplitz_eigs(n, 0.0, 0.5, 0.5);

  DensityMetrics out;
  out.reference_size = n;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = actual[i] - reference[i];
    sq += d * d;
    out.max_abs_dev = std::max(out.max_abs_dev, std::abs(d));
  }
  out.hw_bound_lhs = std::sqrt(sq);
  if (n >= 2) {
    const SpectralMap g = build_spectral_map(reference, actual);
    for (const auto& [x, y] : g.knots()) out.sup_dev = std::max(out.sup_dev, std::abs(g(x) - x));
    for (int i = 0; i + 1 < n; ++i) out.max_gap = std::max(out.max_gap, actual[i] - actual[i + 1]);
  } else {
    out.sup_dev = std::abs(actual[0] - reference[0]);
  }
  const double L = p.lambda();
  if (p.kind() == SpaceKind::Circle)
    out.hw_bound_rhs = 1.0 / (2.0 * (L + 1) * (L + 1));
  else
    out.hw_bound_rhs = 2.0 * (std::sqrt(1.0 + 1.0 / ((L + 1) * (L + 1))) * (0.5 + 1.0 / 12.0) - 0.5);
  return out;
}

// ---------------------------------------------------------------- localization

double dispersion(std::span<const OperatorRep> x_ops, const StateVector& state) {
  const auto& v = state.coefficients;
  double total = 0.0;
  for (const auto& x : x_ops) {
    if (x.dim() != static_cast<std::size_t>(v.size()))
      throw std::invalid_argument("dispersion: operator and state dimensions differ");
    const Eigen::VectorXcd xv = x.entries() * v;
    const double mean = v.dot(xv).real();
    total += xv.squaredNorm() - mean * mean;
  }
  return total;
}

MadoreOperators build_madore_operators(const FuzzyParams& p) {
  if (p.kind() != SpaceKind::Madore)
    throw std::invalid_argument("build_madore_operators: requires the Madore space");
  const int lambda = p.lambda();
  const auto basis = circle_basis(lambda);
  const std::size_t dim = basis.size();
  const double scale = 1.0 / std::sqrt(double(lambda) * lambda + lambda);

  // Basis index i carries m = lambda - i; L_+ raises m, i.e. lowers the index.
  std::vector<Eigen::Triplet<cplx>> plus;
  for (std::size_t i = 1; i < dim; ++i) {
    const int m = basis[i].m;
    const double v = std::sqrt(double(lambda - m) * (lambda + m + 1));
    plus.emplace_back(static_cast<int>(i - 1), static_cast<int>(i), v);
  }
  const SparseMatrix Lp = detail::from_triplets(dim, plus);
  const SparseMatrix Lm = Lp.adjoint();
  const SparseMatrix L3 = detail::diagonal(dim, [&](std::size_t i) { return cplx(basis[i].m); });
  const cplx half(0.5), minus_half_i(0.0, -0.5);

  MadoreOperators out{{}, OperatorRep(basis, L3)};
  out.x.emplace_back(basis, SparseMatrix(half * scale * (Lp + Lm)));
  out.x.emplace_back(basis, SparseMatrix(minus_half_i * scale * (Lp - Lm)));
  out.x.emplace_back(basis, SparseMatrix(cplx(scale) * L3));
  return out;
}

Spectrum madore_spectrum(int lambda) {
  if (lambda < 1) throw std::invalid_argument("madore_spectrum: lambda must be >= 1");
  const double scale = std::sqrt(double(lambda) * lambda + lambda);
  std::vector<double> values;
  for (int m = lambda; m >= -lambda; --m) values.push_back(m / scale);
  return Spectrum(std::move(values));
}

Localization most_localized(const FuzzyParams& p) {
  Localization out;
  const int lambda = p.lambda();
  switch (p.kind()) {
    case SpaceKind::Circle: {
      const SymTridiag x1 = build_x1(p);
      const Eigenpair top = eigenvector_of(x1, eigen_top(x1, kSweepTol));
      out.state = top.vector;
      out.top_eigenvalue = top.value;
      const auto ops = circle_coordinates(p);
      out.dispersion = dispersion(ops, out.state);
      out.L_expectation = expectation(build_circle_operators(p).L.entries(), out.state.coefficients).real();
      break;
    }
    case SpaceKind::Sphere: {
      const SymTridiag b0 = build_Bm(p, 0);
      const Eigenpair top = eigenvector_of(b0, eigen_top(b0, kSweepTol));
      const SphereOperators ops = build_sphere_operators(p);
      Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ops.x0.dim()));
      for (int l = 0; l <= lambda; ++l)
        full(static_cast<Eigen::Index>(sphere_index(lambda, l, 0))) = top.vector.coefficients(l);
      out.state = StateVector{full, true};
      out.top_eigenvalue = top.value;
      out.dispersion = dispersion(sphere_coordinates(ops), out.state);
      out.L_expectation = expectation(ops.L3.entries(), full).real();
      break;
    }
    case SpaceKind::Madore: {
      const MadoreOperators ops = build_madore_operators(p);
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ops.L3.dim()));
      v(0) = 1.0;  // phi_Lambda
      out.state = StateVector{v, true};
      out.top_eigenvalue = madore_spectrum(lambda).top();
      out.dispersion = dispersion(ops.x, out.state);
      out.L_expectation = expectation(ops.L3.entries(), v).real();
      break;
    }
  }
  return out;
}

std::vector<NormChainLink> norm_chain(const FuzzyParams& p) {
  if (p.kind() != SpaceKind::Sphere) throw std::invalid_argument("norm_chain: requires the sphere");
  const int lambda = p.lambda();
  std::vector<NormChainLink> links;
  const SphereCoefficients coeffs = sphere_coefficients(p);
  SymTridiag previous = build_Bm(coeffs, 0);
  double previous_norm = spectral_norm(previous);
  for (int m = 1; m <= lambda; ++m) {
    const SymTridiag block = build_Bm(coeffs, m);
    NormChainLink link;
    link.m = m;
    link.block_norm = spectral_norm(block);
    link.submatrix_norm = spectral_norm(previous.leading(block.size()));
    link.previous_norm = previous_norm;
    const bool first = block.size() == 1 ? link.block_norm <= link.submatrix_norm
                                         : link.block_norm < link.submatrix_norm;
    link.pass = first && link.submatrix_norm < link.previous_norm;
    links.push_back(link);
    previous = block;
    previous_norm = link.block_norm;
  }
  return links;
}

// ---------------------------------------------------------------- sweeps

bool VerificationReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("FUZZY_SPECTRA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, unsigned threads) {
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

VerificationReport top_eig_monotonicity_circle(int lambda_max, const KRule& rule, int lambda_min,
                                               bool check_step) {
  if (lambda_min < 1 || lambda_max < lambda_min)
    throw std::invalid_argument("top_eig_monotonicity_circle: empty lambda range");
  const std::size_t count = static_cast<std::size_t>(lambda_max - lambda_min + 1);
  std::vector<double> alpha(count);
  parallel_for(count, [&](std::size_t i) {
    const int L = lambda_min + static_cast<int>(i);
    alpha[i] = eigen_top(build_x1(make_params(L, rule(L), SpaceKind::Circle)), kSweepTol);
  });

  VerificationReport rep;
  rep.theorem = check_step ? "monotonicity-circle" : "bounds-circle";
  rep.lambda_min = lambda_min;
  rep.lambda_max = lambda_max;
  rep.k_rule = rule.name();
  rep.tolerances = {{"solver", kSweepTol}, {"bound_slack", kCompareTol}};
  for (std::size_t i = 0; i < count; ++i) {
    const int L = lambda_min + static_cast<int>(i);
    const double k = rule(L);
    const double cosine = std::cos(kPi / (2.0 * L + 2.0));
    const double upper = std::sqrt(1.0 + double(L) * (L - 1) / k) * cosine;
    const double limit = 1.0 - kPi * kPi / (8.0 * (L + 1.0) * (L + 1.0));
    const bool increasing = !check_step || i + 1 == count || alpha[i + 1] > alpha[i];
    ReportRow row{L, {{"alpha1", alpha[i]}, {"lower_bound", cosine}, {"upper_bound", upper}}, false};
    row.pass = cosine <= alpha[i] + kCompareTol && alpha[i] <= upper + kCompareTol &&
               alpha[i] >= limit && increasing;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

VerificationReport top_eig_monotonicity_sphere(int lambda_max, const KRule& rule, int lambda_min,
                                               bool check_m_chain, bool check_step) {
  if (lambda_min < 1 || lambda_max < lambda_min)
    throw std::invalid_argument("top_eig_monotonicity_sphere: empty lambda range");
  const std::size_t count = static_cast<std::size_t>(lambda_max - lambda_min + 1);
  std::vector<double> alpha(count);
  std::vector<char> chain(count, 1);
  parallel_for(count, [&](std::size_t i) {
    const int L = lambda_min + static_cast<int>(i);
    const FuzzyParams p = make_params(L, rule(L), SpaceKind::Sphere);
    alpha[i] = eigen_top(build_Bm(p, 0), kSweepTol);
    if (!check_m_chain) return;
    const SphereCoefficients coeffs = sphere_coefficients(p);
    double prev = alpha[i];
    for (int m = 1; m <= L; ++m) {
      const double next = eigen_top(build_Bm(coeffs, m), kSweepTol);
      if (!(next < prev)) chain[i] = 0;
      prev = next;
    }
  });

  // Smallest lambda0 from which every step in range increases.
  std::size_t first_good = count - 1;
  while (first_good > 0 && alpha[first_good] > alpha[first_good - 1]) --first_good;
  const bool tail_ok = count == 1 || alpha[count - 1] > alpha[count - 2];

  VerificationReport rep;
  rep.theorem = check_step ? "monotonicity-sphere" : "bounds-sphere";
  rep.lambda_min = lambda_min;
  rep.lambda_max = lambda_max;
  rep.k_rule = rule.name();
  rep.tolerances = {{"solver", kSweepTol}, {"bound_slack", kCompareTol}};
  if (check_step)
    rep.notes.emplace_back("lambda0", tail_ok ? std::to_string(lambda_min + static_cast<int>(first_good))
                                            : std::string("none"));
  rep.notes.emplace_back("m_chain", check_m_chain ? "checked" : "skipped");
  for (std::size_t i = 0; i < count; ++i) {
    const int L = lambda_min + static_cast<int>(i);
    const double k = rule(L);
    const double lower = std::cos(kPi / (L + 2.0));
    const double upper = std::sqrt(1.0 + (double(L) * (L + 1) + 1.0) / k);
    const double limit = 1.0 - kPi * kPi / (2.0 * (L + 2.0) * (L + 2.0));
    const bool step = i + 1 == count || alpha[i + 1] > alpha[i];
    const bool step_required = check_step && (!tail_ok || i >= first_good);
    ReportRow row{L, {{"alpha1", alpha[i]}, {"lower_bound", lower}, {"upper_bound", upper}}, false};
    row.pass = lower < alpha[i] && (L < 2 || alpha[i] >= limit) &&
               alpha[i] * alpha[i] <= upper * upper + kCompareTol && chain[i] &&
               (step || !step_required);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace fuzzy
