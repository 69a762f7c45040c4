#include "detuf/collision.hpp"

#include <algorithm>
#include <unordered_map>

#include "detuf/errors.hpp"

namespace detuf {
namespace {

std::uint64_t choose2(std::uint64_t k) noexcept { return k < 2 ? 0 : k * (k - 1) / 2; }

std::uint64_t pair_key(VertexId a, VertexId b) noexcept {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

std::string_view to_string(CollisionDefinition def) noexcept {
  return def == CollisionDefinition::strict ? "strict" : "simplified";
}

std::optional<CollisionDefinition> parse_collision_definition(std::string_view name) noexcept {
  if (name == "strict") return CollisionDefinition::strict;
  if (name == "simplified") return CollisionDefinition::simplified;
  return std::nullopt;
}

std::optional<VertexId> reserved_root(const Forest& f, const Edge& e) {
  const VertexId ru = f.root_of(e.u);
  const VertexId rv = f.root_of(e.v);
  if (ru == rv) return std::nullopt;
  return f.root_less(ru, rv) ? ru : rv;
}

bool collides(const Forest& f, const Edge& a, const Edge& b) {
  const auto ra = reserved_root(f, a);
  if (!ra) return false;
  const auto rb = reserved_root(f, b);
  return rb && *ra == *rb;
}

bool collides_simplified(const Forest& f, const Edge& a, const Edge& b) {
  const VertexId au = f.root_of(a.u);
  const VertexId av = f.root_of(a.v);
  const VertexId bu = f.root_of(b.u);
  const VertexId bv = f.root_of(b.v);
  if (au == av || bu == bv) return false;
  return au == bu || au == bv || av == bu || av == bv;
}

bool collides(const Forest& f, const Edge& a, const Edge& b, CollisionDefinition def) {
  return def == CollisionDefinition::strict ? collides(f, a, b) : collides_simplified(f, a, b);
}

std::uint64_t count_colliding_pairs(const Forest& f, std::span<const Edge> edges,
                                    CollisionDefinition def) {
  if (def == CollisionDefinition::strict) {
    std::unordered_map<VertexId, std::uint64_t> per_root;
    for (const Edge& e : edges) {
      if (auto r = reserved_root(f, e)) ++per_root[*r];
    }
    std::uint64_t pairs = 0;
    for (const auto& [root, k] : per_root) pairs += choose2(k);
    return pairs;
  }
  // Pairs sharing a root, minus pairs counted twice because they join the
  // same two components.
  std::unordered_map<VertexId, std::uint64_t> incident;
  std::unordered_map<std::uint64_t, std::uint64_t> parallel;
  for (const Edge& e : edges) {
    const VertexId ru = f.root_of(e.u);
    const VertexId rv = f.root_of(e.v);
    if (ru == rv) continue;
    ++incident[ru];
    ++incident[rv];
    ++parallel[pair_key(ru, rv)];
  }
  std::uint64_t pairs = 0;
  for (const auto& [root, k] : incident) pairs += choose2(k);
  for (const auto& [key, k] : parallel) pairs -= choose2(k);
  return pairs;
}

std::uint64_t count_colliding_pairs_exhaustive(const Forest& f, std::span<const Edge> edges,
                                               CollisionDefinition def) {
  // Resolve roots once; the pair loop then only compares integers.
  constexpr VertexId kNone = ~VertexId{0};
  struct Roots {
    VertexId small;
    VertexId large;
  };
  std::vector<Roots> roots(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const VertexId ru = f.root_of(edges[i].u);
    const VertexId rv = f.root_of(edges[i].v);
    if (ru == rv) {
      roots[i] = {kNone, kNone};
    } else if (f.root_less(ru, rv)) {
      roots[i] = {ru, rv};
    } else {
      roots[i] = {rv, ru};
    }
  }
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const Roots a = roots[i];
    if (a.small == kNone) continue;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      const Roots b = roots[j];
      if (b.small == kNone) continue;
      if (def == CollisionDefinition::strict) {
        pairs += a.small == b.small;
      } else {
        pairs += a.small == b.small || a.small == b.large || a.large == b.small ||
                 a.large == b.large;
      }
    }
  }
  return pairs;
}

StepStats step_stats(const Forest& f, std::span<const Edge> active, std::size_t t,
                     std::size_t total_edges) {
  if (t + active.size() != total_edges) {
    throw ParameterError("step_stats: t must equal total_edges - |active|");
  }
  StepStats stats;
  stats.t = t;

  std::vector<VertexId> roots;
  for (VertexId v = 0; v < f.vertex_count(); ++v) {
    if (f.parent(v) == v) roots.push_back(v);
  }
  stats.component_count = roots.size();
  std::sort(roots.begin(), roots.end(),
            [&](VertexId a, VertexId b) { return f.root_less(a, b); });

  std::unordered_map<VertexId, std::uint64_t> m_by_root;
  for (const Edge& e : active) {
    if (auto r = reserved_root(f, e)) ++m_by_root[*r];
  }
  stats.m.reserve(roots.size());
  for (VertexId r : roots) {
    auto it = m_by_root.find(r);
    const std::uint64_t m = it == m_by_root.end() ? 0 : it->second;
    stats.m.push_back(m);
    if (m > 1) stats.pair_numerator += m * (m - 1);
  }

  const std::uint64_t a = active.size();
  stats.pair_denominator = a < 2 ? 0 : a * (a - 1);
  if (a < 2) stats.pair_numerator = 0;
  stats.colliding_pairs = count_colliding_pairs_exhaustive(f, active);
  return stats;
}

double frozen_term(const Forest& f, const Edge& e, std::size_t i, std::size_t total_edges) {
  if (i >= total_edges) throw ParameterError("frozen_term: multiplier undefined for i >= |E|");
  const double mult = static_cast<double>(total_edges) / static_cast<double>(total_edges - i);
  return mult * static_cast<double>(f.uncompressed_depth(e.u) + f.uncompressed_depth(e.v));
}

double potential(const Forest& f, std::span<const Edge> active, std::size_t t,
                 std::size_t total_edges, double frozen_sum) {
  if (t >= total_edges) throw ParameterError("potential is defined for 0 <= t < |E| only");
  std::uint64_t ranks = 0;
  for (const Edge& e : active) ranks += f.uncompressed_depth(e.u) + f.uncompressed_depth(e.v);
  const double mult = static_cast<double>(total_edges) / static_cast<double>(total_edges - t);
  return mult * static_cast<double>(ranks) + frozen_sum;
}

double monte_carlo_pt(const Forest& f, std::span<const Edge> active, std::size_t trials, Rng& rng,
                      CollisionDefinition def) {
  if (active.size() < 2) throw ParameterError("monte_carlo_pt needs at least two active edges");
  if (trials == 0) throw ParameterError("monte_carlo_pt needs at least one trial");
  std::size_t hits = 0;
  const std::uint64_t a = active.size();
  for (std::size_t k = 0; k < trials; ++k) {
    const auto i = rng.uniform_below(a);
    auto j = rng.uniform_below(a - 1);
    if (j >= i) ++j;
    hits += collides(f, active[i], active[j], def);
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

std::uint64_t toy_window_collisions(const EdgeSequence& seq, std::size_t window,
                                    const LinkingStrategy& strategy) {
  if (window < 2) throw ParameterError("toy_window_collisions needs S >= 2");
  Forest f(seq.vertex_count, strategy, Compaction::full);
  const std::span<const Edge> edges(seq.edges);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::size_t end = std::min(edges.size(), i + window);
    total += count_colliding_pairs(f, edges.subspan(i, end - i));
    f.unite(edges[i].u, edges[i].v);
  }
  return total;
}

}  // namespace detuf
