#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "detuf/graph.hpp"
#include "detuf/rng.hpp"

namespace detuf {

enum class LinkKind { by_size, by_rank, by_random_priority };
enum class Compaction { none, full, one_try_splitting };

std::string_view to_string(LinkKind kind) noexcept;
std::optional<LinkKind> parse_link_kind(std::string_view name) noexcept;
std::string_view to_string(Compaction compaction) noexcept;
std::optional<Compaction> parse_compaction(std::string_view name) noexcept;

/// What the linking order looks at for one root.
struct RootKey {
  std::uint32_t size = 1;
  std::uint32_t rank = 0;
  std::uint64_t priority = 0;
};

/// Linking rule plus per-vertex tie-break priorities.
///
/// Priorities are pairwise distinct, so the induced order on roots is a strict
/// total order: by_size compares (size, priority), by_rank compares
/// (rank, priority), by_random_priority compares priority alone. The smaller
/// root is the one that gets linked below the other.
class LinkingStrategy {
 public:
  /// Priorities are a seeded uniformly random permutation of [0, n).
  static LinkingStrategy random(LinkKind kind, std::size_t n, Rng& rng);
  /// Debug/hand-check mode: priority(v) = v, so lower ids lose ties.
  static LinkingStrategy by_vertex_id(LinkKind kind, std::size_t n);
  /// Throws ParameterError unless the priorities are pairwise distinct.
  static LinkingStrategy with_priorities(LinkKind kind, std::vector<std::uint64_t> priorities);

  LinkKind kind() const noexcept { return kind_; }
  std::size_t vertex_count() const noexcept { return priorities_.size(); }
  std::uint64_t priority(VertexId v) const { return priorities_[v]; }

  /// True iff `a` is strictly smaller than `b` in this strategy's order.
  bool less(const RootKey& a, const RootKey& b) const noexcept {
    switch (kind_) {
      case LinkKind::by_size:
        if (a.size != b.size) return a.size < b.size;
        break;
      case LinkKind::by_rank:
        if (a.rank != b.rank) return a.rank < b.rank;
        break;
      case LinkKind::by_random_priority:
        break;
    }
    return a.priority < b.priority;
  }

 private:
  LinkingStrategy(LinkKind kind, std::vector<std::uint64_t> priorities)
      : kind_(kind), priorities_(std::move(priorities)) {}

  LinkKind kind_;
  std::vector<std::uint64_t> priorities_;
};

struct UnionOutcome {
  bool merged = false;
  std::optional<VertexId> loser_root;
  std::optional<VertexId> winner_root;
};

/// Counters for parent-pointer traffic; all optional.
struct FindCounters {
  std::uint64_t finds = 0;
  std::uint64_t parent_reads = 0;
};

/// Compressed disjoint-set forest with an uncompressed shadow.
///
/// `parent` is subject to the configured compaction; `shadow_parent` records
/// only links and is never rewritten, so `uncompressed_depth` is the depth the
/// vertex would have without any path compaction. Both forests always have
/// the same roots.
///
/// Single writer. Const members may be called concurrently when no writer is
/// active; `link` on disjoint roots and `compress_concurrent` are the only
/// mutators the parallel kernels use from several threads at once.
class Forest {
 public:
  Forest(std::size_t n, LinkingStrategy strategy, Compaction compaction = Compaction::full);

  std::size_t vertex_count() const noexcept { return parent_.size(); }
  const LinkingStrategy& strategy() const noexcept { return strategy_; }
  Compaction compaction() const noexcept { return compaction_; }

  /// Root of u's component; applies the configured compaction to the path.
  VertexId find_root(VertexId u);
  /// Root of u without touching the forest.
  VertexId root_of(VertexId u) const;
  VertexId root_of(VertexId u, FindCounters& counters) const;

  bool is_root(VertexId u) const { return parent_.at(u) == u; }
  bool connected(VertexId u, VertexId v) const { return root_of(u) == root_of(v); }

  RootKey key(VertexId root) const;
  /// Strict total order on roots; throws ContractError for non-roots.
  std::strong_ordering compare_roots(VertexId a, VertexId b) const;
  /// `compare_roots(a, b) < 0` without the root checks.
  bool root_less(VertexId a, VertexId b) const noexcept {
    return strategy_.less(key_unchecked(a), key_unchecked(b));
  }

  /// Union: links the smaller root below the larger one.
  UnionOutcome unite(VertexId u, VertexId v);

  /// Links root `loser` below root `winner` in both forests and updates the
  /// winner's size and rank. No order check; callers decide who loses.
  void link(VertexId loser, VertexId winner) noexcept;

  /// Relinks every vertex on u's path directly to `root` using relaxed atomic
  /// accesses. Safe to run concurrently with other calls that compress
  /// towards the correct roots. Returns the number of parent writes.
  std::uint64_t compress_concurrent(VertexId u, VertexId root) noexcept;

  std::size_t uncompressed_depth(VertexId u) const;
  std::size_t max_uncompressed_depth() const;
  std::size_t component_count() const noexcept;

  VertexId parent(VertexId u) const { return parent_.at(u); }
  VertexId shadow_parent(VertexId u) const { return shadow_.at(u); }
  std::uint32_t component_size(VertexId root) const { return size_.at(root); }
  std::uint32_t rank(VertexId root) const { return rank_.at(root); }

  std::span<const VertexId> parents() const noexcept { return parent_; }
  std::span<const VertexId> shadow_parents() const noexcept { return shadow_; }

 private:
  RootKey key_unchecked(VertexId root) const noexcept {
    return RootKey{size_[root], rank_[root], strategy_.priority(root)};
  }
  void check_vertex(VertexId u) const;

  LinkingStrategy strategy_;
  Compaction compaction_;
  std::vector<VertexId> parent_;
  std::vector<VertexId> shadow_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> rank_;
};

/// Serial reference: plain sequential unions in sequence order.
struct SequentialRun {
  std::vector<std::size_t> success_set;  // positions whose unite() merged
  Forest forest;
};

SequentialRun run_sequential(const EdgeSequence& seq, const LinkingStrategy& strategy,
                             Compaction compaction = Compaction::full);

}  // namespace detuf
