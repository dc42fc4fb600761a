#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "fuzzy_spectra/analysis.hpp"
#include "fuzzy_spectra/circle.hpp"
#include "fuzzy_spectra/eigensolver.hpp"
#include "fuzzy_spectra/sphere.hpp"
#include "oracles.hpp"

using namespace fuzzy;

namespace {
constexpr double kPi = std::numbers::pi;

FuzzyParams circle(int l, std::optional<double> k = std::nullopt) { return make_params(l, k, SpaceKind::Circle); }
FuzzyParams sphere(int l, std::optional<double> k = std::nullopt) { return make_params(l, k, SpaceKind::Sphere); }
FuzzyParams madore(int l) { return make_params(l, std::nullopt, SpaceKind::Madore); }

/// Random orthogonal matrix (QR of a Gaussian matrix).
Eigen::MatrixXd random_rotation(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
}

StateVector random_state(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (auto& c : v) c = cplx(g(rng), g(rng));
  return StateVector::normalize(v);
}

std::vector<OperatorRep> rotate(const std::vector<OperatorRep>& xs, const Eigen::MatrixXd& r) {
  std::vector<OperatorRep> out;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    SparseMatrix acc(xs[0].entries().rows(), xs[0].entries().cols());
    for (Eigen::Index j = 0; j < r.cols(); ++j) acc += SparseMatrix(xs[j].entries() * cplx(r(i, j)));
    out.emplace_back(xs[0].basis(), acc);
  }
  return out;
}
}  // namespace

TEST_CASE("k rules") {
  CHECK(KRule{}.operator()(3) == k_floor(3));
  CHECK(KRule{KRule::Kind::Lambda6, 0}(3) == 729.0);
  CHECK(KRule{KRule::Kind::Lambda6, 0}(1) == 4.0);  // floored
  CHECK(KRule{KRule::Kind::CircleGrowth, 0}(1) == 4.0);
  const double L = 10;
  CHECK(KRule{KRule::Kind::CircleGrowth, 0}(10) ==
        doctest::Approx(L * (L - 1) * std::pow(2 * L + 3, 2) * std::pow(2 * L + 4, 4) / (4 * std::pow(kPi, 4))));
  CHECK(KRule{KRule::Kind::CircleGrowthAlt, 0}(10) ==
        doctest::Approx(L * (L - 1) * std::pow(2 * L + 2, 6) * std::pow(2 * L + 3, 2) / (4 * std::pow(kPi, 4))));
  CHECK(KRule::parse("lambda6").kind == KRule::Kind::Lambda6);
  CHECK(KRule::parse("default").kind == KRule::Kind::Floor);
  CHECK(KRule::parse(KRule{KRule::Kind::CircleGrowthAlt, 0}.name()).kind == KRule::Kind::CircleGrowthAlt);
  CHECK_THROWS_AS(KRule::parse("cubic"), std::invalid_argument);
}

TEST_CASE("parity check") {
  CHECK(parity_check(Spectrum({std::sqrt(0.5), 0.0, -std::sqrt(0.5)}), 1e-12));
  CHECK_FALSE(parity_check(Spectrum({1.0, -0.5}), 1e-12));
  CHECK(parity_check(eigen_all(build_Bm(sphere(5), 0), 1e-14), 1e-10));
  CHECK(parity_check(madore_spectrum(4), 1e-15));
}

TEST_CASE("spectral map") {
  const Spectrum ref = toeplitz_eigs(5, 0.0, 0.5, 0.5);
  const SpectralMap id = build_spectral_map(ref, ref);
  for (const auto& [x, y] : id.knots()) CHECK(id(x) == y);
  CHECK(id(0.0) == doctest::Approx(0.0).epsilon(1e-15));

  const Spectrum actual = eigen_all(build_x1(circle(2, 36.0)), 1e-14);
  const SpectralMap g = build_spectral_map(ref, actual);
  CHECK(g(std::sqrt(3.0) / 2) == doctest::Approx(0.5 * std::sqrt(3 + 2.0 / 36)));
  CHECK(g(0.0) == 0.0);
  CHECK(g(1.0) == doctest::Approx(actual.top()));
  CHECK(g(-1.0) == doctest::Approx(-actual.top()));
  for (double x : {0.1, 0.3, 0.77, 0.95}) CHECK(g(-x) == doctest::Approx(-g(x)));
  CHECK(g(0.6) < g(0.7));

  CHECK_THROWS_AS(build_spectral_map(ref, Spectrum({1.0, 0.0})), std::invalid_argument);
  CHECK_THROWS_AS(build_spectral_map(Spectrum({0.0, 0.0}), Spectrum({1.0, -1.0})), std::invalid_argument);
}

TEST_CASE("interlacing") {
  CHECK(interlacing_check(SymTridiag::toeplitz(3, 0.0, 0.5)));
  for (int lambda = 1; lambda <= 40; ++lambda) CHECK(interlacing_check(build_Bm(sphere(lambda), 0)));
  CHECK(interlacing_check(build_Bm(sphere(6), 5)));  // 2x2 against its 1x1 zero corner
  CHECK_THROWS_AS(interlacing_check(SymTridiag({1.0}, {})), std::invalid_argument);
}

TEST_CASE("density metrics") {
  const DensityMetrics one = density_metrics(circle(1));
  CHECK(one.hw_bound_lhs <= 1e-14);
  CHECK(one.hw_bound_rhs == doctest::Approx(0.125));
  CHECK(one.reference_size == 3);

  const DensityMetrics s = density_metrics(sphere(20), 0);
  CHECK(s.hw_bound_rhs == doctest::Approx(2 * (std::sqrt(1 + 1.0 / 441) * (7.0 / 12) - 0.5)));
  CHECK(s.hw_bound_lhs < s.hw_bound_rhs);
  CHECK(s.max_abs_dev <= s.hw_bound_lhs);

  double prev_sup = 1.0, prev_gap = 2.0;
  for (int lambda : {50, 100, 200, 400}) {
    const DensityMetrics d = density_metrics(circle(lambda));
    CHECK(d.sup_dev <= prev_sup);
    CHECK(d.max_gap <= prev_gap);
    CHECK(d.max_gap <= 2 * std::sin(kPi / (d.reference_size + 1)) + 3 * d.sup_dev);
    prev_sup = d.sup_dev;
    prev_gap = d.max_gap;
  }
  CHECK(prev_sup < 0.01);
  CHECK(prev_gap < 0.01);
  CHECK_THROWS_AS(density_metrics(madore(3)), std::invalid_argument);
}

TEST_CASE("dispersion on the circle at lambda = 1") {
  const auto p = circle(1);
  const auto xs = circle_coordinates(p);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(3);
  psi0(1) = 1.0;  // n = 0
  const StateVector state{psi0, true};
  // x^2 psi_0 = (x+x- + x-x+)/2 psi_0 = (b_0^2 + b_1^2)/2 psi_0 = psi_0
  const Eigen::MatrixXcd x2 = xs[0].dense() * xs[0].dense() + xs[1].dense() * xs[1].dense();
  CHECK(dispersion(xs, state) == doctest::Approx(x2(1, 1).real()));
  CHECK(dispersion(xs, state) == doctest::Approx(1.0));

  const OperatorRep wrong(circle_basis(2), SparseMatrix(5, 5));
  const std::vector<OperatorRep> mixed{wrong};
  CHECK_THROWS_AS(dispersion(mixed, state), std::invalid_argument);
}

TEST_CASE("dispersion is nonnegative and rotation invariant") {
  std::mt19937_64 rng(31337);
  const auto cx = circle_coordinates(circle(4));
  const auto sx = sphere_coordinates(build_sphere_operators(sphere(3)));
  const auto mx = build_madore_operators(madore(3)).x;
  for (const auto* xs : {&cx, &sx, &mx}) {
    const int d = static_cast<int>(xs->size());
    for (int trial = 0; trial < 20; ++trial) {
      const StateVector st = random_state(rng, xs->front().dim());
      const double base = dispersion(*xs, st);
      CHECK(base >= -1e-12);
      CHECK(dispersion(rotate(*xs, random_rotation(rng, d)), st) == doctest::Approx(base).epsilon(1e-10));
    }
  }
}

TEST_CASE("most localized states") {
  const Localization c = most_localized(circle(6));
  const auto xs = circle_coordinates(circle(6));
  const Eigen::VectorXcd& v = c.state.coefficients;
  const double x1 = v.dot(xs[0].entries() * v).real();
  const double x2 = v.dot(xs[1].entries() * v).real();
  CHECK(x1 == doctest::Approx(c.top_eigenvalue));
  CHECK(std::abs(x2) < 1e-12);
  CHECK(c.dispersion < kPi * kPi / 4 / 36);

  for (int lambda : {2, 5, 12}) {
    const Localization s = most_localized(sphere(lambda));
    CHECK(s.L_expectation == 0.0);
    CHECK(s.dispersion < (kPi * kPi - 1) / (lambda * lambda));
    CHECK(s.top_eigenvalue == doctest::Approx(eigen_top(build_Bm(sphere(lambda), 0), 1e-14)));

    const Localization f = most_localized(madore(lambda));
    CHECK(f.L_expectation == lambda);
    CHECK(f.top_eigenvalue == doctest::Approx(std::sqrt(double(lambda) / (lambda + 1))));
    CHECK(f.dispersion == doctest::Approx(1.0 / (lambda + 1)));
  }
}

TEST_CASE("Madore spectrum and operators") {
  const Spectrum s = madore_spectrum(1);
  CHECK(s[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(s[1] == 0.0);
  CHECK(s[2] == doctest::Approx(-std::sqrt(0.5)));
  double prev = 0.0;
  for (int lambda = 1; lambda <= 50; ++lambda) {
    const double top = madore_spectrum(lambda).top();
    CHECK(top < 1.0);
    CHECK(top > prev);
    prev = top;
  }
  const auto ops = build_madore_operators(madore(3));
  Eigen::MatrixXcd sq = Eigen::MatrixXcd::Zero(7, 7);
  for (const auto& x : ops.x) sq += x.dense() * x.dense();
  CHECK((sq - Eigen::MatrixXcd::Identity(7, 7)).norm() < 1e-13);
  const Eigen::MatrixXcd comm = ops.x[0].dense() * ops.x[1].dense() - ops.x[1].dense() * ops.x[0].dense();
  CHECK((comm - cplx(0, 1 / std::sqrt(12.0)) * ops.x[2].dense()).norm() < 1e-13);
  CHECK_THROWS_AS(build_madore_operators(circle(2)), std::invalid_argument);
  CHECK_THROWS_AS(madore_spectrum(0), std::invalid_argument);
}

TEST_CASE("norm chain for lambda <= 60") {
  for (int lambda = 1; lambda <= 60; ++lambda) {
    const auto links = norm_chain(sphere(lambda));
    REQUIRE(links.size() == static_cast<std::size_t>(lambda));
    for (const auto& link : links) {
      INFO("lambda " << lambda << " m " << link.m);
      CHECK(link.pass);
    }
  }
}

TEST_CASE("monotonicity sweeps") {
  const VerificationReport c = top_eig_monotonicity_circle(40, KRule{KRule::Kind::CircleGrowth, 0});
  CHECK(c.passed());
  REQUIRE(c.rows.size() == 40);
  CHECK(c.rows[0].values[0].second == doctest::Approx(std::sqrt(0.5)));

  const VerificationReport s = top_eig_monotonicity_sphere(30, KRule{KRule::Kind::Lambda6, 0});
  CHECK(s.passed());
  CHECK(s.rows[0].values[0].second == doctest::Approx(std::sqrt(5.0 / 12.0)));
  bool has_lambda0 = false;
  for (const auto& [k, v] : s.notes) has_lambda0 = has_lambda0 || (k == "lambda0" && v != "none");
  CHECK(has_lambda0);
}

TEST_CASE("parallel_for covers every index once and propagates errors") {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 4);
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); }, 3),
                  std::runtime_error);

  setenv("FUZZY_SPECTRA_THREADS", "3", 1);
  CHECK(default_thread_count() == 3);
  setenv("FUZZY_SPECTRA_THREADS", "zero", 1);
  CHECK(default_thread_count() >= 1);
  unsetenv("FUZZY_SPECTRA_THREADS");
}
