#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "detuf/forest.hpp"
#include "detuf/rng.hpp"

namespace detuf {

/// Positions whose value is smaller than both circular neighbours.
/// `perm` must be a permutation of 1..N with N >= 3.
std::size_t count_local_minima(std::span<const std::uint32_t> perm);

struct MinimaStats {
  std::size_t N = 0;
  std::size_t trials = 0;
  double mean_M = 0.0;
  double tail_prob = 0.0;  // fraction of trials with M <= (N - 3) / 18
};

MinimaStats minima_experiment(std::size_t N, std::size_t trials, Rng& rng);

/// Fraction of shuffled N-cycles whose first W edges reserve pairwise
/// different roots of the initial forest, i.e. a first window of size W
/// runs to its end. 2 <= W <= N.
double prefix_no_collision_prob(std::size_t N, std::size_t W, std::size_t trials,
                                const LinkingStrategy& strategy, Rng& rng);

/// Iterations of the windowed algorithm with the window always covering the
/// whole unprocessed suffix, one count per shuffled N-cycle.
std::vector<std::size_t> maximal_window_iterations(std::size_t N, std::size_t trials,
                                                   const LinkingStrategy& strategy, Rng& rng,
                                                   bool detach_stop_edge = true, int threads = 1);

inline constexpr const char* kMinimaCsvHeader = "N,trials,mean_M,tail_prob";
inline constexpr const char* kPrefixCsvHeader = "N,W,no_collision_prob";
inline constexpr const char* kIterationsCsvHeader = "N,seed,iterations";

}  // namespace detuf
