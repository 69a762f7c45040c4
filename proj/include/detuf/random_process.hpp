#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "detuf/collision.hpp"
#include "detuf/forest.hpp"
#include "detuf/graph.hpp"
#include "detuf/rng.hpp"

namespace detuf {

/// One step of the sequential random process, recorded before edge t+1 is
/// inserted. p values are ratios of pair counts, so they are exact up to the
/// final division.
struct ProcessStep {
  std::size_t t = 0;
  std::size_t component_count = 0;
  std::uint64_t colliding_pairs = 0;   // strict definition
  std::uint64_t simplified_pairs = 0;  // shared-component definition
  std::uint64_t active_pairs = 0;      // C(|E| - t, 2)
  double phi = 0.0;

  double p_exact() const noexcept { return ratio(colliding_pairs); }
  double p_simplified() const noexcept { return ratio(simplified_pairs); }
  double p(CollisionDefinition def) const noexcept {
    return def == CollisionDefinition::strict ? p_exact() : p_simplified();
  }

 private:
  double ratio(std::uint64_t pairs) const noexcept {
    return active_pairs == 0 ? 0.0
                             : static_cast<double>(pairs) / static_cast<double>(active_pairs);
  }
};

/// Rank of the i-th inserted edge (1-based), frozen right after it is applied.
struct FrozenRank {
  std::size_t step = 0;
  std::uint32_t rank = 0;
  double multiplier = 0.0;  // |E| / (|E| - step)
};

struct ProcessTrace {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  EdgeSequence order;               // the processed order (only when recording)
  std::vector<ProcessStep> steps;   // |E| entries when recording
  std::vector<FrozenRank> frozen;   // |E| - 1 entries when recording
  double sum_p = 0.0;               // sum over t of p_t
  double sum_p_first_half = 0.0;    // sum over t <= |E|/2
  double sum_p_simplified = 0.0;
  double phi_final = 0.0;           // Phi at t = |E| - 1
  std::size_t max_depth = 0;        // max uncompressed depth at the end
};

struct ProcessOptions {
  /// Keep per-step records, frozen ranks and the order. Sums are always kept.
  bool record_steps = true;
};

/// Shuffles `seq` with `rng`, then runs the process on that order.
ProcessTrace run_random_process(const EdgeSequence& seq, const LinkingStrategy& strategy, Rng& rng,
                                ProcessOptions options = {});

/// Runs the process on `ordered` as given.
ProcessTrace run_process_in_order(EdgeSequence ordered, const LinkingStrategy& strategy,
                                  ProcessOptions options = {});

/// Rows `t,C_t,p_exact,phi,colliding_pairs` (no header). With the simplified
/// definition the p and pair columns use shared-component collisions.
void write_trace_rows(const ProcessTrace& trace, std::ostream& out,
                      CollisionDefinition def = CollisionDefinition::strict);

inline constexpr const char* kTraceCsvHeader = "t,C_t,p_exact,phi,colliding_pairs";

}  // namespace detuf
