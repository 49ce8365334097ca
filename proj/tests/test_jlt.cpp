#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "condembed/io.hpp"
#include "condembed/jlt.hpp"
#include "test_support.hpp"

using namespace condembed;

TEST_CASE("jlt of the identity is zero", "[jlt]") {
  const IntensityMatrix q = jlt(validate_stochastic(Matrix::identity(3)));
  CHECK(q.matrix() == Matrix(3, 3, 0.0));
}

TEST_CASE("jlt matches the published credit generator", "[jlt]") {
  const StochasticMatrix credit =
      validate_stochastic(read_matrix_csv_file(std::string(CONDEMBED_DATA_DIR) + "/credit8.csv"));
  const IntensityMatrix q = jlt(credit);
  CHECK(q(0, 0) == Catch::Approx(std::log(0.8910)).epsilon(1e-12));
  CHECK(q(0, 0) == Catch::Approx(-0.1154).margin(2e-4));
  CHECK(q(0, 1) == Catch::Approx(0.1020).margin(2e-4));
  CHECK(q(6, 6) == Catch::Approx(-0.4320).margin(2e-4));
  for (std::size_t j = 0; j < 8; ++j) CHECK(q(7, j) == 0.0);  // absorbing row
}

TEST_CASE("equal diagonals collapse to the scaled difference form", "[jlt]") {
  const double p = 0.5;
  const StochasticMatrix flat = validate_stochastic(Matrix{{p, 1 - p}, {1 - p, p}});
  const IntensityMatrix q = jlt(flat);
  const double factor = std::log(p) / (p - 1.0);  // 2 ln 2
  CHECK(factor == Catch::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
  CHECK(q(0, 1) == Catch::Approx(factor * (1 - p)).epsilon(1e-14));
  CHECK(q(0, 0) == Catch::Approx(-factor * (1 - p)).epsilon(1e-14));
}

TEST_CASE("jlt rejects zero diagonals", "[jlt]") {
  CHECK_THROWS_AS(jlt(validate_stochastic(Matrix{{0.0, 1.0}, {0.5, 0.5}})), not_j1_embeddable);
}

TEST_CASE("jlt rows sum to zero", "[jlt]") {
  std::mt19937_64 rng(13001);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = gen::random_stochastic(rng, 2 + rng() % 7, 0.05);
    const IntensityMatrix q = jlt(p);
    for (std::size_t i = 0; i < q.n(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < q.n(); ++j) row += q(i, j);
      CHECK(std::abs(row) < 1e-12);
    }
  }
}

TEST_CASE("jlt rate factor is below the conditional one", "[jlt]") {
  // ln p / (p - 1) < 1/p throughout (0, 1)
  for (int k = 1; k <= 99; ++k) {
    const double p = k / 100.0;
    CHECK(std::log(p) / (p - 1.0) < 1.0 / p);
  }
}
