#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "condembed/conditional_kernel.hpp"
#include "condembed/j1_solver.hpp"
#include "test_support.hpp"

using namespace condembed;

TEST_CASE("joint kernel of the zero generator is the identity", "[kernel]") {
  const JointKernel k = joint_kernel(IntensityMatrix(Matrix(2, 2, 0.0)));
  CHECK(k.p_star == Matrix::identity(2));
  CHECK(conditional_transition_matrix(IntensityMatrix(Matrix(2, 2, 0.0))).matrix() ==
        Matrix::identity(2));
}

TEST_CASE("joint kernel pinned against the quadrature oracle", "[kernel]") {
  const double inv_e = std::exp(-1.0);
  const JointKernel sym = joint_kernel(IntensityMatrix(Matrix{{-1, 1}, {1, -1}}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(sym.p_star(i, j) == Catch::Approx(inv_e).epsilon(1e-14));
  CHECK(sym.p_star(0, 1) ==
        Catch::Approx(oracle::tau_by_quadrature(-1.0, -1.0)).epsilon(1e-11));

  const JointKernel half = joint_kernel(IntensityMatrix(Matrix{{-2, 2}, {0, 0}}));
  // 2 * tau(-2, 0) = 1 - e^{-2}
  CHECK(half.p_star(0, 1) == Catch::Approx(-std::expm1(-2.0)).epsilon(1e-13));
  CHECK(half.p_star(0, 1) ==
        Catch::Approx(2.0 * oracle::tau_by_quadrature(-2.0, 0.0)).epsilon(1e-11));
  CHECK(half.p_star(0, 0) == std::exp(-2.0));
  CHECK(half.p_star(1, 1) == 1.0);
}

TEST_CASE("joint kernel rows are sub-stochastic with positive diagonal", "[kernel]") {
  std::mt19937_64 rng(9001);
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = gen::random_intensity(rng, 2 + rng() % 5, 3.0);
    const JointKernel k = joint_kernel(q);
    for (std::size_t i = 0; i < q.n(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < q.n(); ++j) {
        CHECK(k.p_star(i, j) >= 0.0);
        row += k.p_star(i, j);
      }
      CHECK(k.p_star(i, i) == std::exp(q(i, i)));
      CHECK(k.p_star(i, i) > 0.0);
      CHECK(row <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("conditional matrix normalizes the joint kernel", "[kernel]") {
  const StochasticMatrix c = conditional_transition_matrix(IntensityMatrix(Matrix{{-2, 2}, {0, 0}}));
  const double p11 = std::exp(-2.0) / (std::exp(-2.0) - std::expm1(-2.0));
  CHECK(c(0, 0) == Catch::Approx(p11).epsilon(1e-14));
  CHECK(c(0, 1) == Catch::Approx(1.0 - p11).epsilon(1e-13));
  CHECK(c(1, 0) == 0.0);
  CHECK(c(1, 1) == 1.0);

  // doubled-rate generator of the flat 2x2 chain reproduces it
  const StochasticMatrix flat =
      conditional_transition_matrix(IntensityMatrix(Matrix{{-1, 1}, {1, -1}}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(flat(i, j) == Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("diagonal of the conditional matrix is strictly positive", "[kernel]") {
  std::mt19937_64 rng(9002);
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = gen::random_intensity(rng, 2 + rng() % 6, 8.0);
    const StochasticMatrix c = conditional_transition_matrix(q);
    for (std::size_t i = 0; i < c.n(); ++i) CHECK(c(i, i) > 0.0);
  }
}

TEST_CASE("absorbing states map to identity rows", "[kernel]") {
  const IntensityMatrix q(Matrix{{-1.0, 0.5, 0.5}, {0.0, 0.0, 0.0}, {0.25, 0.25, -0.5}});
  const StochasticMatrix c = conditional_transition_matrix(q);
  CHECK(c(1, 0) == 0.0);
  CHECK(c(1, 1) == 1.0);
  CHECK(c(1, 2) == 0.0);
}

TEST_CASE("round trip through the solver", "[kernel]") {
  std::mt19937_64 rng(9003);
  for (int trial = 0; trial < 25; ++trial) {
    const auto p = gen::random_stochastic(rng, 2 + rng() % 5, 0.2);
    const SolveReport report = j1_generator(p);
    const StochasticMatrix back = conditional_transition_matrix(report.generator);
    for (std::size_t i = 0; i < p.n(); ++i)
      for (std::size_t j = 0; j < p.n(); ++j)
        CHECK(back(i, j) == Catch::Approx(p(i, j)).margin(1e-9));
  }
}
