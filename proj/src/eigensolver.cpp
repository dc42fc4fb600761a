#include "fuzzy_spectra/eigensolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace fuzzy {
namespace {

constexpr int kLanes = 8;
constexpr int kMaxBisections = 2000;

struct Prepared {
  const double* d;
  std::vector<double> e2;
  std::size_t n;
  double pivmin;
};

Prepared prepare(const SymTridiag& t) {
  Prepared p{t.diag().data(), {}, t.size(), 0.0};
  p.e2.reserve(t.size());
  double emax = 1.0;
  for (double e : t.offdiag()) {
    p.e2.push_back(e * e);
    emax = std::max(emax, e * e);
  }
  p.pivmin = std::numeric_limits<double>::min() * emax;
  return p;
}

// Zero pivots are replaced by +pivmin, which evaluates the sequence just
// below x and so counts eigenvalues strictly less than x.
inline std::size_t count_one(const Prepared& p, double x) {
  double q = p.d[0] - x;
  if (std::abs(q) < p.pivmin) q = p.pivmin;
  std::size_t count = q < 0.0;
  for (std::size_t i = 1; i < p.n; ++i) {
    q = (p.d[i] - x) - p.e2[i - 1] / q;
    if (std::abs(q) < p.pivmin) q = p.pivmin;
    count += q < 0.0;
  }
  return count;
}

// Several independent shifts per sweep over the matrix; the recursions do
// not depend on each other, so the divisions pipeline.
inline void count_lanes(const Prepared& p, const std::array<double, kLanes>& x,
                        std::array<std::size_t, kLanes>& out) {
  std::array<double, kLanes> q;
  std::array<std::size_t, kLanes> c{};
  for (int j = 0; j < kLanes; ++j) {
    q[j] = p.d[0] - x[j];
    if (std::abs(q[j]) < p.pivmin) q[j] = p.pivmin;
    c[j] = q[j] < 0.0;
  }
  for (std::size_t i = 1; i < p.n; ++i) {
    const double di = p.d[i];
    const double ei = p.e2[i - 1];
    for (int j = 0; j < kLanes; ++j) {
      double v = (di - x[j]) - ei / q[j];
      if (std::abs(v) < p.pivmin) v = p.pivmin;
      q[j] = v;
      c[j] += v < 0.0;
    }
  }
  out = c;
}

struct Interval {
  double lo, hi;
};

Interval gershgorin(const SymTridiag& t) {
  const auto d = t.diag();
  const auto e = t.offdiag();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i + 1 < d.size()) r += std::abs(e[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double pad = 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max({std::abs(lo), std::abs(hi), 1.0}) * static_cast<double>(d.size());
  return {lo - pad, hi + pad};
}

bool converged(double lo, double hi, double tol) {
  const double mid = 0.5 * (lo + hi);
  return hi - lo <= tol || mid <= lo || mid >= hi;
}

// Any point of a converged bracket is within tol; an exact zero is preferred
// when the bracket contains one.
double representative(double lo, double hi) { return (lo <= 0.0 && hi >= 0.0) ? 0.0 : 0.5 * (lo + hi); }

}  // namespace

SturmSequence SturmSequence::evaluate(const SymTridiag& t, double x) {
  const Prepared p = prepare(t);
  SturmSequence s;
  s.x = x;
  s.ratios.reserve(p.n);
  double q = p.d[0] - x;
  if (std::abs(q) < p.pivmin) q = p.pivmin;
  s.ratios.push_back(q);
  for (std::size_t i = 1; i < p.n; ++i) {
    q = (p.d[i] - x) - p.e2[i - 1] / q;
    if (std::abs(q) < p.pivmin) q = p.pivmin;
    s.ratios.push_back(q);
  }
  s.count = static_cast<std::size_t>(
      std::count_if(s.ratios.begin(), s.ratios.end(), [](double r) { return r < 0.0; }));
  return s;
}

Spectrum toeplitz_eigs(int n, double a, double b, double c) {
  if (n < 1) throw std::invalid_argument("toeplitz_eigs: n must be >= 1");
  if (b * c < 0.0) throw std::invalid_argument("toeplitz_eigs: bc < 0 gives a complex spectrum");
  const double s = 2.0 * std::sqrt(b * c);
  std::vector<double> values;
  values.reserve(n);
  for (int h = 1; h <= n; ++h) values.push_back(a + s * std::cos(h * std::numbers::pi / (n + 1)));
  return Spectrum(std::move(values));
}

StateVector toeplitz_eigvec(int n, int h, double b, double c, bool normalize) {
  if (n < 1 || h < 1 || h > n) throw std::invalid_argument("toeplitz_eigvec: need 1 <= h <= n");
  if (!(b * c > 0.0)) throw std::invalid_argument("toeplitz_eigvec: requires bc > 0");
  Eigen::VectorXd v(n);
  const double ratio = c / b;
  for (int k = 1; k <= n; ++k)
    v(k - 1) = std::pow(ratio, 0.5 * k) * std::sin(double(h) * k * std::numbers::pi / (n + 1));
  return StateVector::from_real(v, normalize);
}

std::size_t sturm_count(const SymTridiag& t, double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("sturm_count: x must be finite");
  return count_one(prepare(t), x);
}

double gershgorin_radius(const SymTridiag& t) {
  double dmax = 0.0, emax = 0.0;
  for (double d : t.diag()) dmax = std::max(dmax, std::abs(d));
  for (double e : t.offdiag()) emax = std::max(emax, std::abs(e));
  return dmax + 2.0 * emax;
}

Spectrum eigen_all(const SymTridiag& t, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("eigen_all: tol must be positive");
  const Prepared p = prepare(t);
  const std::size_t n = p.n;
  if (n == 1) return Spectrum({p.d[0]});
  const Interval g = gershgorin(t);

  // Coarse pass: counts on a uniform grid give every eigenvalue an initial
  // bracket one grid cell wide.
  const std::size_t cells = std::min<std::size_t>(std::max<std::size_t>(n, 16), 4096);
  std::vector<double> grid(cells + 1);
  std::vector<std::size_t> below(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    grid[i] = g.lo + (g.hi - g.lo) * (static_cast<double>(i) / static_cast<double>(cells));
  grid.back() = g.hi;
  below.front() = 0;
  below.back() = n;
  for (std::size_t i = 1; i < cells; i += kLanes) {
    std::array<double, kLanes> xs;
    std::array<std::size_t, kLanes> cs;
    for (int j = 0; j < kLanes; ++j) xs[j] = grid[std::min(i + j, cells - 1)];
    count_lanes(p, xs, cs);
    for (int j = 0; j < kLanes && i + j < cells; ++j) below[i + j] = cs[j];
  }

  std::vector<double> lo(n), hi(n);
  for (std::size_t c = 0; c < cells; ++c)
    for (std::size_t idx = below[c]; idx < below[c + 1]; ++idx) {
      lo[idx] = grid[c];
      hi[idx] = grid[c + 1];
    }

  // Lockstep bisection over groups of kLanes indices: index idx (ascending)
  // keeps count(lo) <= idx < count(hi).
  std::vector<double> values(n);
  for (std::size_t base = 0; base < n; base += kLanes) {
    std::array<std::size_t, kLanes> idx;
    for (int j = 0; j < kLanes; ++j) idx[j] = std::min(base + j, n - 1);
    for (int iter = 0;; ++iter) {
      bool done = true;
      for (int j = 0; j < kLanes; ++j) done = done && converged(lo[idx[j]], hi[idx[j]], tol);
      if (done) break;
      if (iter > kMaxBisections) throw ConvergenceError("eigen_all: bisection bracket stopped shrinking");
      std::array<double, kLanes> xs;
      std::array<std::size_t, kLanes> cs;
      for (int j = 0; j < kLanes; ++j) xs[j] = 0.5 * (lo[idx[j]] + hi[idx[j]]);
      count_lanes(p, xs, cs);
      for (int j = 0; j < kLanes; ++j) {
        const std::size_t i = idx[j];
        if (converged(lo[i], hi[i], tol)) continue;
        if (cs[j] > i)
          hi[i] = xs[j];
        else
          lo[i] = xs[j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) values[i] = representative(lo[i], hi[i]);
  return Spectrum(std::move(values));
}

double eigen_top(const SymTridiag& t, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("eigen_top: tol must be positive");
  const Prepared p = prepare(t);
  if (p.n == 1) return p.d[0];
  const Interval g = gershgorin(t);
  double lo = g.lo, hi = g.hi;
  const std::size_t target = p.n - 1;
  for (int iter = 0; !converged(lo, hi, tol); ++iter) {
    if (iter > kMaxBisections) throw ConvergenceError("eigen_top: bisection bracket stopped shrinking");
    const double mid = 0.5 * (lo + hi);
    if (count_one(p, mid) > target)
      hi = mid;
    else
      lo = mid;
  }
  return representative(lo, hi);
}

namespace {

// LU with partial pivoting of T - shift I (the dgttrf scheme): U has three
// diagonals, L is unit lower bidiagonal with multipliers and row swaps.
struct TridiagLU {
  std::vector<double> u0, u1, u2, mult;
  std::vector<char> swapped;

  TridiagLU(const SymTridiag& t, double shift, double tiny) {
    const std::size_t n = t.size();
    const auto d = t.diag();
    const auto e = t.offdiag();
    u0.assign(n, 0.0);
    u1.assign(n, 0.0);
    u2.assign(n, 0.0);
    mult.assign(n, 0.0);
    swapped.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) u0[i] = d[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) u1[i] = e[i];
    std::vector<double> sub(e.begin(), e.end());
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(u0[i]) >= std::abs(sub[i])) {
        if (u0[i] == 0.0) u0[i] = tiny;
        const double f = sub[i] / u0[i];
        mult[i] = f;
        u0[i + 1] -= f * u1[i];
      } else {
        // swap rows i and i+1
        const double f = u0[i] / sub[i];
        swapped[i] = 1;
        mult[i] = f;
        u0[i] = sub[i];
        const double tmp = u1[i];
        u1[i] = u0[i + 1];
        u0[i + 1] = tmp - f * u0[i + 1];
        if (i + 2 < n) {
          u2[i] = u1[i + 1];
          u1[i + 1] = -f * u2[i];
        }
      }
    }
    if (u0[n - 1] == 0.0) u0[n - 1] = tiny;
    for (auto& v : u0)
      if (std::abs(v) < tiny) v = std::copysign(tiny, v);
  }

  void solve(Eigen::VectorXd& b) const {
    const std::size_t n = u0.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) {
        const double tmp = b(i);
        b(i) = b(i + 1);
        b(i + 1) = tmp - mult[i] * b(i);
      } else {
        b(i + 1) -= mult[i] * b(i);
      }
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = b(ii);
      if (ii + 1 < n) s -= u1[ii] * b(ii + 1);
      if (ii + 2 < n) s -= u2[ii] * b(ii + 2);
      b(ii) = s / u0[ii];
    }
  }
};

Eigen::VectorXd apply(const SymTridiag& t, const Eigen::VectorXd& v) {
  const auto d = t.diag();
  const auto e = t.offdiag();
  const std::size_t n = t.size();
  Eigen::VectorXd out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = d[i] * v(i);
    if (i > 0) s += e[i - 1] * v(i - 1);
    if (i + 1 < n) s += e[i] * v(i + 1);
    out(i) = s;
  }
  return out;
}

Eigen::VectorXd start_vector(std::size_t n) {
  // fixed 64-bit LCG: reproducible on every platform
  std::uint64_t state = 0x9E3779B97F4A7C15ULL;
  Eigen::VectorXd v(n);
  for (std::size_t i = 0; i < n; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    v(i) = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  return v;
}

}  // namespace

Eigenpair eigenvector_of(const SymTridiag& t, double lambda) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("eigenvector_of: non-finite shift");
  const std::size_t n = t.size();
  const double scale = std::max(1.0, gershgorin_radius(t));
  const double target = 1e-10 * scale;
  if (n == 1) {
    Eigen::VectorXd one(1);
    one(0) = 1.0;
    return {t.diag()[0], StateVector::from_real(one), 0.0};
  }

  const double tiny = std::numeric_limits<double>::epsilon() * scale;
  const TridiagLU lu(t, lambda, tiny);
  Eigen::VectorXd v = start_vector(n);
  v.normalize();
  Eigenpair best;
  best.residual = std::numeric_limits<double>::infinity();
  constexpr int kBudget = 8;
  for (int it = 0; it < kBudget; ++it) {
    lu.solve(v);
    const double norm = v.norm();
    if (!std::isfinite(norm) || norm == 0.0) throw ConvergenceError("eigenvector_of: solve broke down");
    v /= norm;
    const Eigen::VectorXd tv = apply(t, v);
    const double rayleigh = v.dot(tv);
    const double residual = (tv - rayleigh * v).norm();
    if (residual < best.residual) {
      best.value = rayleigh;
      best.residual = residual;
      best.vector = StateVector::from_real(v, false);
    }
    if (residual <= target && it >= 1) break;
  }
  if (!(best.residual <= target))
    throw ConvergenceError("eigenvector_of: residual " + std::to_string(best.residual) +
                           " above tolerance after inverse iteration");

  Eigen::VectorXcd& c = best.vector.coefficients;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (std::abs(c(i)) > 1e-10) {
      if (c(i).real() < 0.0) c = -c;
      break;
    }
  }
  best.vector.normalized = true;
  return best;
}

}  // namespace fuzzy
