#include <doctest.h>

#include <cmath>

#include "fuzzy_spectra/eigensolver.hpp"
#include "fuzzy_spectra/sphere.hpp"
#include "oracles.hpp"

using namespace fuzzy;

namespace {
FuzzyParams sphere(int lambda, std::optional<double> k = std::nullopt) {
  return make_params(lambda, k, SpaceKind::Sphere);
}
}  // namespace

TEST_CASE("c_l closed form with vanishing ends") {
  const auto s = sphere_coefficients(sphere(4));
  CHECK(s.c(0) == 0.0);
  CHECK(s.c(5) == 0.0);
  for (int l = 1; l <= 4; ++l) CHECK(s.c(l) == doctest::Approx(std::sqrt(1.0 + l * l / 400.0)));
}

TEST_CASE("Clebsch tables: spot values") {
  const auto s = sphere_coefficients(sphere(3));
  CHECK(s.A0(1, 0) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(s.A0(2, 2) == 0.0);
  CHECK(s.A(Component::Plus, 2, 0) == doctest::Approx(std::sqrt(2.0 / 15.0) / std::sqrt(2.0)));
  CHECK(s.A(Component::Minus, 2, 0) == doctest::Approx(-std::sqrt(2.0 / 15.0) / std::sqrt(2.0)));
  CHECK(s.B(Component::Zero, 0, 0) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(s.A0(1, 2) == 0.0);  // |m| > l
}

TEST_CASE("lowering coefficients mirror raising coefficients of the adjoint component") {
  // x_a^dagger = x_{-a} forces A_l^{a,m} = B_{l-1}^{-a,m+a}
  const auto s = sphere_coefficients(sphere(6));
  for (int l = 1; l <= 7; ++l)
    for (int m = -l; m <= l; ++m)
      for (Component a : {Component::Zero, Component::Plus, Component::Minus}) {
        const int ai = static_cast<int>(a);
        CHECK(s.A(a, l, m) == doctest::Approx(s.B(static_cast<Component>(-ai), l - 1, m + ai)));
      }
}

TEST_CASE("B_m shapes and small cases") {
  const auto p = sphere(1);
  const SymTridiag b0 = build_Bm(p, 0);
  REQUIRE(b0.size() == 2);
  // c_1 A_1^{0,0} = sqrt(5/4) / sqrt(3)
  CHECK(b0.offdiag()[0] == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(build_Bm(p, 1) == SymTridiag({0.0}, {}));
  CHECK_THROWS_AS(build_Bm(p, 2), std::invalid_argument);

  for (int lambda : {3, 7}) {
    const auto q = sphere(lambda);
    for (int m = 0; m <= lambda; ++m) {
      CHECK(build_Bm(q, m).size() == static_cast<std::size_t>(lambda - m + 1));
      CHECK(build_Bm(q, m) == build_Bm(q, -m));
    }
    CHECK(build_block_family(q).blocks.size() == static_cast<std::size_t>(2 * lambda + 1));
  }
}

TEST_CASE("dense x_0 restricted to a block equals B_m") {
  for (int lambda : {2, 5}) {
    const auto p = sphere(lambda);
    const Eigen::MatrixXcd x0 = build_sphere_operators(p).x0.dense();
    for (int m = -lambda; m <= lambda; ++m) {
      const auto off = static_cast<Eigen::Index>(sphere_block_offset(lambda, m));
      const auto n = static_cast<Eigen::Index>(lambda - std::abs(m) + 1);
      const Eigen::MatrixXcd block = x0.block(off, off, n, n);
      CHECK((block - build_Bm(p, m).dense().cast<cplx>()).norm() < 1e-15);
      // nothing outside the block in these columns
      CHECK(x0.middleCols(off, n).norm() == doctest::Approx(block.norm()));
    }
  }
}

TEST_CASE("spectrum of dense x_0 is the union of block spectra") {
  for (int lambda = 1; lambda <= 8; ++lambda) {
    const auto p = sphere(lambda);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_sphere_operators(p).x0.dense(),
                                                       Eigen::EigenvaluesOnly);
    std::vector<double> dense(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::vector<double> blocks;
    const auto family = build_block_family(p);
    for (const auto& [m, b] : family.blocks) {
      const Spectrum s = eigen_all(b, 1e-14);
      blocks.insert(blocks.end(), s.values().begin(), s.values().end());
    }
    std::sort(dense.begin(), dense.end());
    std::sort(blocks.begin(), blocks.end());
    REQUIRE(dense.size() == blocks.size());
    CHECK(oracle::max_abs_diff(dense, blocks) < 1e-10);
  }
}

TEST_CASE("sphere algebra residuals vanish for lambda <= 8") {
  for (int lambda = 1; lambda <= 8; ++lambda) {
    const auto res = sphere_algebra_residuals(sphere(lambda));
    CHECK(res.size() >= 12);
    for (const auto& [key, v] : res) {
      INFO(key << " at lambda " << lambda);
      if (key.find("nilpotent") != std::string::npos)
        CHECK(v == 0.0);
      else
        CHECK(v <= 1e-10);
    }
  }
}

TEST_CASE("fitted K matches (1 + (L+1)^2/k)/(2L+1) for every coordinate pair") {
  for (int lambda = 1; lambda <= 8; ++lambda)
    for (double scale : {1.0, 3.5}) {
      const auto p = sphere(lambda, scale * k_floor(lambda));
      const double expected = (1.0 + (lambda + 1.0) * (lambda + 1.0) / p.k()) / (2.0 * lambda + 1.0);
      for (CoordinatePair pair : {CoordinatePair{1, 2}, CoordinatePair{2, 3}, CoordinatePair{3, 1}})
        CHECK(fit_commutator_K(p, pair) == doctest::Approx(expected).epsilon(1e-10));
    }
  CHECK(fit_commutator_K(sphere(1)) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("Cartesian components are Hermitian and L_3 is diagonal") {
  const auto ops = build_sphere_operators(sphere(3));
  for (const auto& x : sphere_coordinates(ops)) CHECK((x.dense() - x.dense().adjoint()).norm() < 1e-14);
  for (const auto& l : sphere_angular_momenta(ops)) CHECK((l.dense() - l.dense().adjoint()).norm() < 1e-14);
  const Eigen::MatrixXcd L3 = ops.L3.dense();
  CHECK((L3 - Eigen::MatrixXcd(L3.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("coefficient inequality holds") {
  for (int lambda = 1; lambda <= 40; ++lambda) CHECK(coefficient_inequality_check(sphere(lambda)));
}

TEST_CASE("sphere operators reject other spaces") {
  CHECK_THROWS_AS(build_Bm(make_params(2, std::nullopt, SpaceKind::Circle), 0), std::invalid_argument);
  CHECK_THROWS_AS(sphere_coefficients(make_params(2, std::nullopt, SpaceKind::Madore)), std::invalid_argument);
}
