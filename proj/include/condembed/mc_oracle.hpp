#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "condembed/markov.hpp"
#include "condembed/matrix.hpp"
#include "condembed/rng.hpp"

namespace condembed {

struct SimulationConfig {
  std::uint64_t paths_per_state = 1'000'000;
  std::uint64_t seed = 0;
  /// 0 = use hardware concurrency. Results are identical for any value.
  unsigned threads = 0;

  static constexpr double horizon = 1.0;

  void validate() const {
    if (paths_per_state < 1000)
      throw std::invalid_argument("SimulationConfig: need at least 1000 paths per state");
  }
};

/// Empirical conditional transition frequencies with binomial standard
/// errors, from paths retained under the at-most-one-jump event.
struct SimulationEstimate {
  Matrix conditional_freq;
  Matrix std_err;
  std::vector<double> retained_fraction;
  std::uint64_t total_paths;
};

namespace detail {

struct PathTally {
  std::vector<std::uint64_t> end_state_counts;  // n x n, row-major
  std::vector<std::uint64_t> retained;          // per start state

  explicit PathTally(std::size_t n) : end_state_counts(n * n, 0), retained(n, 0) {}

  void merge(const PathTally& other) {
    for (std::size_t k = 0; k < end_state_counts.size(); ++k)
      end_state_counts[k] += other.end_state_counts[k];
    for (std::size_t i = 0; i < retained.size(); ++i) retained[i] += other.retained[i];
  }
};

/// Simulate one path of the jump chain from `start`; returns the end state
/// at the horizon, or n if the path saw two or more jumps and is discarded.
inline std::size_t simulate_path(const IntensityMatrix& Q, std::size_t start,
                                 Xoshiro256pp& rng) {
  const std::size_t n = Q.n();
  std::size_t state = start;
  double t = 0.0;
  int jumps = 0;
  for (;;) {
    const double rate = -Q(state, state);
    if (rate <= 0.0) return state;  // absorbing: holds forever
    t += -std::log(rng.uniform_open01()) / rate;
    if (t >= SimulationConfig::horizon) return state;

    // Jump-chain draw: target j != state with probability q_ij / rate.
    double v = rng.uniform01() * rate;
    std::size_t target = state;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == state) continue;
      const double q = Q(state, j);
      if (q <= 0.0) continue;
      target = j;
      v -= q;
      if (v < 0.0) break;
    }
    // A jump is a state change; a row whose rate is roundoff noise with no
    // positive exit channel holds like an absorbing state.
    if (target == state) return state;
    if (++jumps > 1) return n;  // second jump inside the interval: discard
    state = target;
  }
}

}  // namespace detail

/// Monte-Carlo estimate of the conditional one-step transition matrix of
/// the chain with rate matrix Q given at most one jump in [0, 1]. Holding
/// times are exponential with rate -q_ii and jump targets follow the
/// embedded chain. Every (start state, path index) pair owns an RNG
/// substream derived from the master seed, so the estimate is bit-identical
/// for a given seed regardless of thread count.
inline SimulationEstimate simulate_conditional(const IntensityMatrix& Q,
                                               const SimulationConfig& cfg) {
  cfg.validate();
  const std::size_t n = Q.n();
  const std::uint64_t paths = cfg.paths_per_state;

  unsigned thread_count = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  if (thread_count == 0) thread_count = 1;

  auto run_chunk = [&](std::size_t state, std::uint64_t begin, std::uint64_t end,
                       detail::PathTally& tally) {
    for (std::uint64_t k = begin; k < end; ++k) {
      const std::uint64_t stream = static_cast<std::uint64_t>(state) * paths + k;
      Xoshiro256pp rng(cfg.seed + 0x9E3779B97F4A7C15ull * (stream + 1));
      const std::size_t end_state = detail::simulate_path(Q, state, rng);
      if (end_state < n) {
        ++tally.retained[state];
        ++tally.end_state_counts[state * n + end_state];
      }
    }
  };

  std::vector<detail::PathTally> partials(thread_count, detail::PathTally(n));
  std::vector<std::thread> workers;
  workers.reserve(thread_count);
  const std::uint64_t chunk = (paths + thread_count - 1) / thread_count;
  for (unsigned t = 0; t < thread_count; ++t) {
    const std::uint64_t begin = static_cast<std::uint64_t>(t) * chunk;
    const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, paths);
    if (begin >= end) break;
    workers.emplace_back([&, t, begin, end] {
      for (std::size_t state = 0; state < n; ++state)
        run_chunk(state, begin, end, partials[t]);
    });
  }
  for (auto& w : workers) w.join();

  detail::PathTally tally(n);
  for (const auto& part : partials) tally.merge(part);

  SimulationEstimate est{Matrix(n, n), Matrix(n, n), std::vector<double>(n),
                         paths * static_cast<std::uint64_t>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t m = tally.retained[i];
    est.retained_fraction[i] = static_cast<double>(m) / static_cast<double>(paths);
    if (m == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double f = static_cast<double>(tally.end_state_counts[i * n + j]) /
                       static_cast<double>(m);
      est.conditional_freq(i, j) = f;
      est.std_err(i, j) = std::sqrt(f * (1.0 - f) / static_cast<double>(m));
    }
  }
  return est;
}

}  // namespace condembed
