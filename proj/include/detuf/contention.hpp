#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "detuf/forest.hpp"
#include "detuf/graph.hpp"
#include "detuf/rng.hpp"

namespace detuf {

/// Synchronous model: per iteration T threads each take one remaining edge
/// (the next T positions of a uniform shuffle); every unordered pair that
/// would write the same root counts as one contention event. All T edges are
/// then applied in sequence order.
struct ContentionRun {
  std::size_t T = 0;
  std::uint64_t events = 0;
  std::vector<std::uint64_t> per_iteration;
};

/// Runs the model on `ordered` as given. T >= 2.
ContentionRun simulate_contention_ordered(const EdgeSequence& ordered,
                                          const LinkingStrategy& strategy, std::size_t T);

/// Shuffles with `rng` first.
ContentionRun simulate_contention(const EdgeSequence& seq, const LinkingStrategy& strategy,
                                  std::size_t T, Rng& rng);

struct ContentionSweepRow {
  std::size_t T = 0;
  std::vector<std::uint64_t> events;  // one per seed
  double mean_events = 0.0;
  double per_T_squared = 0.0;         // mean_events / T^2
};

/// Seed k of every T uses master.split(k), so all T see the same orders.
std::vector<ContentionSweepRow> sweep_contention(const EdgeSequence& seq,
                                                 const LinkingStrategy& strategy,
                                                 std::span<const std::size_t> T_list,
                                                 std::size_t seeds, const Rng& master);

inline constexpr const char* kContentionCsvHeader = "T,seed,events";

/// Rows `T,seed,events` (no header).
void write_contention_rows(std::span<const ContentionSweepRow> rows, std::ostream& out);

}  // namespace detuf
