#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "detuf/forest.hpp"
#include "detuf/graph.hpp"
#include "detuf/rng.hpp"

namespace detuf {

enum class CollisionDefinition {
  strict,      // both external and the same "smaller" root
  simplified,  // both external and any shared root
};

std::string_view to_string(CollisionDefinition def) noexcept;
std::optional<CollisionDefinition> parse_collision_definition(std::string_view name) noexcept;

/// The root an external edge would reserve (loser of compare_roots), or
/// nullopt if the endpoints are already connected.
std::optional<VertexId> reserved_root(const Forest& f, const Edge& e);

bool collides(const Forest& f, const Edge& a, const Edge& b);
bool collides_simplified(const Forest& f, const Edge& a, const Edge& b);
bool collides(const Forest& f, const Edge& a, const Edge& b, CollisionDefinition def);

/// Colliding unordered pairs among `edges`, counted by grouping on roots.
std::uint64_t count_colliding_pairs(const Forest& f, std::span<const Edge> edges,
                                    CollisionDefinition def = CollisionDefinition::strict);

/// Same count by visiting every unordered pair.
std::uint64_t count_colliding_pairs_exhaustive(const Forest& f, std::span<const Edge> edges,
                                               CollisionDefinition def = CollisionDefinition::strict);

/// Snapshot of the random process at step t, computed from scratch.
struct StepStats {
  std::size_t t = 0;
  std::size_t component_count = 0;
  /// m_i^t for every component, listed in increasing linking order.
  std::vector<std::uint64_t> m;
  std::uint64_t pair_numerator = 0;    // sum m_i (m_i - 1)
  std::uint64_t pair_denominator = 0;  // (|E|-t)(|E|-t-1), 0 when < 2 active
  std::uint64_t colliding_pairs = 0;   // exhaustive enumeration

  double p_exact() const noexcept {
    return pair_denominator == 0
               ? 0.0
               : static_cast<double>(pair_numerator) / static_cast<double>(pair_denominator);
  }
  /// The two routes agree: numerator / 2 == enumerated pairs.
  bool consistent() const noexcept { return pair_numerator == 2 * colliding_pairs; }
};

/// `active` are the |E| - t edges not yet inserted into `f`.
StepStats step_stats(const Forest& f, std::span<const Edge> active, std::size_t t,
                     std::size_t total_edges);

/// |E| / (|E| - i) * (depth(u) + depth(v)) on the shadow forest.
double frozen_term(const Forest& f, const Edge& e, std::size_t i, std::size_t total_edges);

/// Potential at step t: the multiplier times active-edge ranks, plus the
/// already frozen contributions. Throws ParameterError unless t < |E|.
double potential(const Forest& f, std::span<const Edge> active, std::size_t t,
                 std::size_t total_edges, double frozen_sum);

/// Fraction of `trials` draws of two distinct active edges that collide.
double monte_carlo_pt(const Forest& f, std::span<const Edge> active, std::size_t trials, Rng& rng,
                      CollisionDefinition def = CollisionDefinition::strict);

/// Sum over i of the colliding pairs inside [i, i+S) with edges < i applied.
std::uint64_t toy_window_collisions(const EdgeSequence& seq, std::size_t window,
                                    const LinkingStrategy& strategy);

}  // namespace detuf
