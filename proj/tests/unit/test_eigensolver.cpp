#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fuzzy_spectra/circle.hpp"
#include "fuzzy_spectra/eigensolver.hpp"
#include "fuzzy_spectra/sphere.hpp"
#include "oracles.hpp"

using namespace fuzzy;

TEST_CASE("toeplitz closed forms") {
  const Spectrum s = toeplitz_eigs(3, 0.0, 0.5, 0.5);
  CHECK(s[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(s[1] == doctest::Approx(0.0));
  CHECK(s[2] == doctest::Approx(-std::sqrt(0.5)));
  CHECK(toeplitz_eigs(1, 2.0, 1.0, 1.0)[0] == doctest::Approx(2.0));
  CHECK_THROWS_AS(toeplitz_eigs(3, 0.0, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(toeplitz_eigvec(3, 1, 1.0, 0.0), std::invalid_argument);

  const StateVector v = toeplitz_eigvec(3, 1, 0.5, 0.5);
  CHECK(v.coefficients(0).real() == doctest::Approx(0.5));
  CHECK(v.coefficients(1).real() == doctest::Approx(std::sqrt(0.5)));
  CHECK(v.coefficients(2).real() == doctest::Approx(0.5));
}

TEST_CASE("Sturm count: fixed points") {
  const SymTridiag x1 = SymTridiag::toeplitz(3, 0.0, 0.5);
  CHECK(sturm_count(x1, 0.0) == 1);
  CHECK(sturm_count(x1, 1.0) == 3);
  CHECK(sturm_count(x1, -1.0) == 0);
  const SymTridiag t({1.0, -2.0, 0.5, 3.0}, {0.3, -1.2, 2.0});
  CHECK(sturm_count(t, spectral_norm(t) + 1.0) == 4);
  CHECK(sturm_count(t, -spectral_norm(t) - 1.0) == 0);
  CHECK_THROWS_AS(sturm_count(t, std::nan("")), std::invalid_argument);
}

TEST_CASE("Sturm count agrees with raw minors and dense eigenvalues on random matrices") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const SymTridiag t = oracle::random_tridiag(rng, size(rng));
    for (int j = 0; j < 20; ++j) {
      const double x = shift(rng);
      const std::size_t got = sturm_count(t, x);
      CHECK(got == oracle::raw_minor_count(t, x));
      CHECK(got == oracle::dense_count(t, x));
      const SturmSequence seq = SturmSequence::evaluate(t, x);
      CHECK(seq.count == got);
      CHECK(seq.ratios.size() == t.size());
    }
  }
}

TEST_CASE("scaled recursion survives large orders") {
  const SymTridiag t = SymTridiag::toeplitz(10000, 0.0, 0.5);
  // cos(h pi / 10001) < 0 exactly for h > 5000.5
  CHECK(sturm_count(t, 0.0) == 5000);
  CHECK(sturm_count(t, 0.999) < 10000);
}

TEST_CASE("eigen_all matches the Toeplitz closed form") {
  for (int n = 1; n <= 200; ++n) {
    const Spectrum got = eigen_all(SymTridiag::toeplitz(n, 0.0, 0.5), 1e-14);
    CHECK(oracle::max_abs_diff(got.values(), toeplitz_eigs(n, 0.0, 0.5, 0.5).values()) <= 1e-11);
  }
  for (int n : {1001, 4001}) {
    const Spectrum got = eigen_all(SymTridiag::toeplitz(n, 0.0, 0.5), 1e-14);
    CHECK(oracle::max_abs_diff(got.values(), toeplitz_eigs(n, 0.0, 0.5, 0.5).values()) <= 1e-11);
  }
}

TEST_CASE("eigen_all matches dense eigenvalues on random matrices") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const SymTridiag t = oracle::random_tridiag(rng, 1 + trial * 3);
    const Spectrum got = eigen_all(t, 1e-13);
    CHECK(oracle::max_abs_diff(got.values(), oracle::dense_eigs(t.dense())) <= 1e-11);
    CHECK(eigen_top(t, 1e-13) == doctest::Approx(got.top()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(eigen_all(SymTridiag::toeplitz(3, 0.0, 0.5), 0.0), std::invalid_argument);
}

TEST_CASE("closed-form fuzzy spectra") {
  const Spectrum x1 = eigen_all(build_x1(make_params(1, std::nullopt, SpaceKind::Circle)), 1e-14);
  CHECK(oracle::max_abs_diff(x1.values(), {std::sqrt(0.5), 0.0, -std::sqrt(0.5)}) <= 1e-12);
  CHECK(x1[1] == 0.0);
  const double top2 = eigen_top(build_x1(make_params(2, 36.0, SpaceKind::Circle)), 1e-14);
  CHECK(std::abs(top2 - 0.5 * std::sqrt(55.0 / 18.0)) <= 1e-12);
  for (int lambda : {1, 4, 9}) {
    const auto p = make_params(lambda, std::nullopt, SpaceKind::Sphere);
    CHECK(eigen_all(build_Bm(p, lambda), 1e-14).values() == std::vector<double>{0.0});
  }
}

TEST_CASE("repeated eigenvalues are returned as separate entries") {
  const SymTridiag t({1.0, 1.0, 2.0}, {0.0, 0.0});
  const Spectrum s = eigen_all(t, 1e-14);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(2.0));
  CHECK(s[1] == doctest::Approx(1.0));
  CHECK(s[2] == doctest::Approx(1.0));
}

TEST_CASE("inverse iteration: Toeplitz eigenvectors up to sign") {
  for (int n : {1, 2, 3, 17, 200}) {
    const SymTridiag t = SymTridiag::toeplitz(n, 0.0, 0.5);
    const Spectrum s = toeplitz_eigs(n, 0.0, 0.5, 0.5);
    for (int h = 1; h <= n; h += std::max(1, n / 7)) {
      const Eigenpair pair = eigenvector_of(t, s[h - 1]);
      const Eigen::VectorXcd ref = toeplitz_eigvec(n, h, 0.5, 0.5).coefficients;
      const double sign = (pair.vector.coefficients.dot(ref)).real() < 0 ? -1.0 : 1.0;
      CHECK((pair.vector.coefficients - sign * ref).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK(pair.residual <= 1e-10);
      CHECK(pair.vector.coefficients.norm() == doctest::Approx(1.0));
    }
  }
  const SymTridiag big = SymTridiag::toeplitz(4001, 0.0, 0.5);
  const Eigenpair top = eigenvector_of(big, toeplitz_eigs(4001, 0.0, 0.5, 0.5)[0]);
  CHECK((top.vector.coefficients - toeplitz_eigvec(4001, 1, 0.5, 0.5).coefficients).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("inverse iteration: sign convention and trivial order") {
  const Eigenpair one = eigenvector_of(SymTridiag({3.0}, {}), 3.0);
  CHECK(one.vector.coefficients.size() == 1);
  CHECK(one.vector.coefficients(0).real() == 1.0);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const SymTridiag t = oracle::random_tridiag(rng, 30);
    for (double lambda : eigen_all(t, 1e-14).values()) {
      const Eigenpair pair = eigenvector_of(t, lambda);
      const auto& c = pair.vector.coefficients;
      Eigen::Index first = 0;
      while (std::abs(c(first)) <= 1e-10) ++first;
      CHECK(c(first).real() > 0.0);
      CHECK(pair.residual <= 1e-10 * std::max(1.0, spectral_norm(t)));
    }
  }
}

TEST_CASE("top eigenvector of X^Lambda approaches the sine profile") {
  double previous = 1.0;
  for (int lambda : {5, 20, 80, 320}) {
    const SymTridiag x = build_x1(make_params(lambda, std::nullopt, SpaceKind::Circle));
    const Eigenpair pair = eigenvector_of(x, eigen_top(x, 1e-14));
    const Eigen::VectorXcd ref = toeplitz_eigvec(2 * lambda + 1, 1, 0.5, 0.5).coefficients;
    const double dev = (pair.vector.coefficients - ref).cwiseAbs().maxCoeff();
    CHECK(dev < previous);
    previous = dev;
  }
}
