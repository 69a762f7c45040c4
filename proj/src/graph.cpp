#include "detuf/graph.hpp"

#include <span>
#include <unordered_set>

#include "detuf/errors.hpp"

namespace detuf {

std::string_view to_string(GraphKind kind) noexcept {
  switch (kind) {
    case GraphKind::cycle: return "cycle";
    case GraphKind::star: return "star";
    case GraphKind::path: return "path";
    case GraphKind::erdos_renyi: return "erdos-renyi";
    case GraphKind::complete: return "complete";
  }
  return "unknown";
}

std::optional<GraphKind> parse_graph_kind(std::string_view name) noexcept {
  for (auto kind : {GraphKind::cycle, GraphKind::star, GraphKind::path, GraphKind::erdos_renyi,
                    GraphKind::complete}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

EdgeSequence generate(const GeneratorSpec& spec, Rng& rng) {
  const std::size_t n = spec.n;
  const std::size_t min_n = spec.kind == GraphKind::cycle ? 3 : 2;
  if (n < min_n) {
    throw ParameterError(std::string(to_string(spec.kind)) + " needs n >= " + std::to_string(min_n));
  }
  if (n > std::numeric_limits<VertexId>::max()) throw ParameterError("n exceeds vertex id range");
  if (spec.kind == GraphKind::erdos_renyi && !(spec.p > 0.0 && spec.p <= 1.0)) {
    throw ParameterError("erdos-renyi needs 0 < p <= 1");
  }

  EdgeSequence seq;
  seq.vertex_count = n;
  const auto id = [](std::size_t x) { return static_cast<VertexId>(x); };
  switch (spec.kind) {
    case GraphKind::cycle:
      seq.edges.reserve(n);
      for (std::size_t i = 0; i < n; ++i) seq.edges.push_back({id(i), id((i + 1) % n)});
      break;
    case GraphKind::star:
      seq.edges.reserve(n - 1);
      for (std::size_t i = 1; i < n; ++i) seq.edges.push_back({0, id(i)});
      break;
    case GraphKind::path:
      seq.edges.reserve(n - 1);
      for (std::size_t i = 0; i + 1 < n; ++i) seq.edges.push_back({id(i), id(i + 1)});
      break;
    case GraphKind::erdos_renyi:
      // Lexicographic pairs, one coin each.
      seq.edges.reserve(static_cast<std::size_t>(spec.p * static_cast<double>(n) * (n - 1) / 2 * 1.05) + 16);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (rng.bernoulli(spec.p)) seq.edges.push_back({id(i), id(j)});
        }
      }
      break;
    case GraphKind::complete:
      seq.edges.reserve(n * (n - 1) / 2);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) seq.edges.push_back({id(i), id(j)});
      }
      break;
  }

  seq.provenance = std::string(to_string(spec.kind)) + "(n=" + std::to_string(n);
  if (spec.kind == GraphKind::erdos_renyi) seq.provenance += ",p=" + std::to_string(spec.p);
  seq.provenance += ")";
  if (spec.kind == GraphKind::erdos_renyi) seq.provenance += " seed=" + std::to_string(rng.seed());
  return seq;
}

EdgeSequence shuffle(EdgeSequence seq, Rng& rng) {
  shuffle_in_place(std::span<Edge>(seq.edges), rng);
  return seq;
}

EdgeSequence assign_random_weights(EdgeSequence seq, Rng& rng) {
  std::unordered_set<double> used;
  used.reserve(seq.edges.size() * 2);
  for (auto& e : seq.edges) {
    double w = rng.uniform01();
    while (!used.insert(w).second) w = rng.uniform01();
    e.weight = w;
  }
  return seq;
}

void validate(const EdgeSequence& seq) {
  for (std::size_t i = 0; i < seq.edges.size(); ++i) {
    const Edge& e = seq.edges[i];
    if (e.u == e.v) throw ParameterError("edge " + std::to_string(i) + " is a self-loop");
    if (e.u >= seq.vertex_count || e.v >= seq.vertex_count) {
      throw ParameterError("edge " + std::to_string(i) + " has an endpoint out of range");
    }
    if (e.has_weight() && e.weight < 0.0) {
      throw ParameterError("edge " + std::to_string(i) + " has a negative weight");
    }
  }
}

}  // namespace detuf
