#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "detuf/rng.hpp"

namespace detuf {

using VertexId = std::uint32_t;

/// One unite(u, v) task. Weight is NaN when the edge is unweighted.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double weight = std::numeric_limits<double>::quiet_NaN();

  bool has_weight() const noexcept { return !std::isnan(weight); }

  friend bool operator==(const Edge& a, const Edge& b) noexcept {
    if (a.u != b.u || a.v != b.v || a.has_weight() != b.has_weight()) return false;
    return !a.has_weight() || a.weight == b.weight;
  }
};

/// Ordered edge list over vertices [0, vertex_count). Order is significant.
struct EdgeSequence {
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;
  std::string provenance;

  std::size_t size() const noexcept { return edges.size(); }
  bool empty() const noexcept { return edges.empty(); }

  /// Equality ignores provenance.
  friend bool operator==(const EdgeSequence& a, const EdgeSequence& b) {
    return a.vertex_count == b.vertex_count && a.edges == b.edges;
  }
};

enum class GraphKind { cycle, star, path, erdos_renyi, complete };

/// Stable CLI name ("cycle", "star", "path", "erdos-renyi", "complete").
std::string_view to_string(GraphKind kind) noexcept;
std::optional<GraphKind> parse_graph_kind(std::string_view name) noexcept;

struct GeneratorSpec {
  GraphKind kind = GraphKind::cycle;
  std::size_t n = 0;
  double p = 0.0;  // erdos_renyi only
};

/// Canonical (enumeration-order) edge list; `rng` is only read by erdos_renyi.
EdgeSequence generate(const GeneratorSpec& spec, Rng& rng);

/// Fisher–Yates permutation of the edge order.
EdgeSequence shuffle(EdgeSequence seq, Rng& rng);

/// Pairwise-distinct i.i.d. uniform weights in [0, 1); collisions are redrawn.
EdgeSequence assign_random_weights(EdgeSequence seq, Rng& rng);

/// Throws ParameterError if any edge is a self-loop or out of range.
void validate(const EdgeSequence& seq);

}  // namespace detuf
