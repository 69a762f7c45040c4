#include "detuf/forest.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <string>
#include <unordered_set>

#include "detuf/errors.hpp"

namespace detuf {

std::string_view to_string(LinkKind kind) noexcept {
  switch (kind) {
    case LinkKind::by_size: return "size";
    case LinkKind::by_rank: return "rank";
    case LinkKind::by_random_priority: return "priority";
  }
  return "unknown";
}

std::optional<LinkKind> parse_link_kind(std::string_view name) noexcept {
  for (auto kind : {LinkKind::by_size, LinkKind::by_rank, LinkKind::by_random_priority}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(Compaction compaction) noexcept {
  switch (compaction) {
    case Compaction::none: return "none";
    case Compaction::full: return "full";
    case Compaction::one_try_splitting: return "splitting";
  }
  return "unknown";
}

std::optional<Compaction> parse_compaction(std::string_view name) noexcept {
  for (auto c : {Compaction::none, Compaction::full, Compaction::one_try_splitting}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

LinkingStrategy LinkingStrategy::random(LinkKind kind, std::size_t n, Rng& rng) {
  std::vector<std::uint64_t> priorities(n);
  std::iota(priorities.begin(), priorities.end(), std::uint64_t{0});
  shuffle_in_place(std::span<std::uint64_t>(priorities), rng);
  return LinkingStrategy(kind, std::move(priorities));
}

LinkingStrategy LinkingStrategy::by_vertex_id(LinkKind kind, std::size_t n) {
  std::vector<std::uint64_t> priorities(n);
  std::iota(priorities.begin(), priorities.end(), std::uint64_t{0});
  return LinkingStrategy(kind, std::move(priorities));
}

LinkingStrategy LinkingStrategy::with_priorities(LinkKind kind,
                                                 std::vector<std::uint64_t> priorities) {
  std::unordered_set<std::uint64_t> seen(priorities.begin(), priorities.end());
  if (seen.size() != priorities.size()) throw ParameterError("priorities must be pairwise distinct");
  return LinkingStrategy(kind, std::move(priorities));
}

Forest::Forest(std::size_t n, LinkingStrategy strategy, Compaction compaction)
    : strategy_(std::move(strategy)), compaction_(compaction) {
  if (n == 0) throw ParameterError("forest needs at least one vertex");
  if (strategy_.vertex_count() != n) {
    throw ParameterError("strategy has " + std::to_string(strategy_.vertex_count()) +
                         " priorities for " + std::to_string(n) + " vertices");
  }
  parent_.resize(n);
  std::iota(parent_.begin(), parent_.end(), VertexId{0});
  shadow_ = parent_;
  size_.assign(n, 1);
  rank_.assign(n, 0);
}

void Forest::check_vertex(VertexId u) const {
  if (u >= parent_.size()) {
    throw ParameterError("vertex " + std::to_string(u) + " out of range");
  }
}

VertexId Forest::root_of(VertexId u) const {
  check_vertex(u);
  while (parent_[u] != u) u = parent_[u];
  return u;
}

VertexId Forest::root_of(VertexId u, FindCounters& counters) const {
  check_vertex(u);
  ++counters.finds;
  for (;;) {
    ++counters.parent_reads;
    const VertexId p = parent_[u];
    if (p == u) return u;
    u = p;
  }
}

VertexId Forest::find_root(VertexId u) {
  check_vertex(u);
  switch (compaction_) {
    case Compaction::none:
      while (parent_[u] != u) u = parent_[u];
      return u;
    case Compaction::full: {
      VertexId root = u;
      while (parent_[root] != root) root = parent_[root];
      while (parent_[u] != root && u != root) {
        const VertexId next = parent_[u];
        parent_[u] = root;
        u = next;
      }
      return root;
    }
    case Compaction::one_try_splitting:
      while (parent_[u] != u) {
        const VertexId p = parent_[u];
        parent_[u] = parent_[p];
        u = p;
      }
      return u;
  }
  return u;
}

RootKey Forest::key(VertexId root) const {
  check_vertex(root);
  if (parent_[root] != root) throw ContractError("vertex " + std::to_string(root) + " is not a root");
  return key_unchecked(root);
}

std::strong_ordering Forest::compare_roots(VertexId a, VertexId b) const {
  const RootKey ka = key(a);
  const RootKey kb = key(b);
  if (a == b) return std::strong_ordering::equal;
  return strategy_.less(ka, kb) ? std::strong_ordering::less : std::strong_ordering::greater;
}

void Forest::link(VertexId loser, VertexId winner) noexcept {
  parent_[loser] = winner;
  shadow_[loser] = winner;
  size_[winner] += size_[loser];
  if (rank_[winner] == rank_[loser]) ++rank_[winner];
}

UnionOutcome Forest::unite(VertexId u, VertexId v) {
  const VertexId ru = find_root(u);
  const VertexId rv = find_root(v);
  if (ru == rv) return {};
  const bool u_smaller = root_less(ru, rv);
  const VertexId loser = u_smaller ? ru : rv;
  const VertexId winner = u_smaller ? rv : ru;
  link(loser, winner);
  return {true, loser, winner};
}

std::uint64_t Forest::compress_concurrent(VertexId u, VertexId root) noexcept {
  std::uint64_t writes = 0;
  while (u != root) {
    std::atomic_ref<VertexId> slot(parent_[u]);
    const VertexId next = slot.load(std::memory_order_relaxed);
    if (next == root) break;
    slot.store(root, std::memory_order_relaxed);
    ++writes;
    u = next;
  }
  return writes;
}

std::size_t Forest::uncompressed_depth(VertexId u) const {
  check_vertex(u);
  std::size_t depth = 0;
  while (shadow_[u] != u) {
    u = shadow_[u];
    ++depth;
  }
  return depth;
}

std::size_t Forest::max_uncompressed_depth() const {
  // Memoised over the shadow forest: depth(v) = depth(shadow(v)) + 1.
  const std::size_t n = shadow_.size();
  std::vector<std::int32_t> depth(n, -1);
  std::vector<VertexId> stack;
  std::size_t best = 0;
  for (VertexId v = 0; v < n; ++v) {
    VertexId x = v;
    while (depth[x] < 0 && shadow_[x] != x) {
      stack.push_back(x);
      x = shadow_[x];
    }
    if (depth[x] < 0) depth[x] = 0;
    std::int32_t d = depth[x];
    while (!stack.empty()) {
      depth[stack.back()] = ++d;
      stack.pop_back();
    }
    best = std::max<std::size_t>(best, static_cast<std::size_t>(depth[v]));
  }
  return best;
}

std::size_t Forest::component_count() const noexcept {
  std::size_t count = 0;
  for (VertexId v = 0; v < parent_.size(); ++v) count += parent_[v] == v;
  return count;
}

SequentialRun run_sequential(const EdgeSequence& seq, const LinkingStrategy& strategy,
                             Compaction compaction) {
  SequentialRun run{{}, Forest(seq.vertex_count, strategy, compaction)};
  for (std::size_t i = 0; i < seq.edges.size(); ++i) {
    if (run.forest.unite(seq.edges[i].u, seq.edges[i].v).merged) run.success_set.push_back(i);
  }
  return run;
}

}  // namespace detuf
