#include "detuf/windowed.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <ostream>
#include <string>
#include <unordered_map>

#include "detuf/errors.hpp"

namespace detuf {
namespace {

using Index = std::int64_t;

void check_threads(int threads) {
  if (threads < 1) throw ParameterError("thread count must be at least 1, got " + std::to_string(threads));
}

void check_range(const Forest& f, std::span<const VertexId> vertices) {
  for (VertexId v : vertices) {
    if (v >= f.vertex_count()) throw ParameterError("vertex " + std::to_string(v) + " out of range");
  }
}

// Scratch DSU over local indices.
struct LocalDsu {
  explicit LocalDsu(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;  // lowest index becomes the representative
  }
  std::vector<std::uint32_t> parent;
};

// Merges the roots of one group pairwise, halves first, deciding each link by
// the current root order. Returns the surviving root.
VertexId merge_range(Forest& f, std::span<const VertexId> roots, std::uint64_t& writes) {
  if (roots.size() == 1) return roots.front();
  const std::size_t mid = roots.size() / 2;
  const VertexId a = merge_range(f, roots.first(mid), writes);
  const VertexId b = merge_range(f, roots.subspan(mid), writes);
  ++writes;
  if (f.root_less(a, b)) {
    f.link(a, b);
    return b;
  }
  f.link(b, a);
  return a;
}

}  // namespace

void WindowPolicy::validate() const {
  if (initial == 0) throw ParameterError("window size must be positive");
  if (kind == Kind::adaptive) {
    if (min_size == 0) throw ParameterError("minimum window size must be positive");
    if (min_size > max_size) throw ParameterError("minimum window size exceeds the maximum");
    if (initial < min_size || initial > max_size) {
      throw ParameterError("initial window size must lie in [min, max]");
    }
  }
}

std::vector<VertexId> bulk_find_roots(Forest& f, std::span<const VertexId> vertices, int threads,
                                      WorkCounters* work) {
  check_threads(threads);
  check_range(f, vertices);
  const Index k = static_cast<Index>(vertices.size());
  std::vector<VertexId> roots(vertices.size());
  const Forest& view = f;

  std::uint64_t finds = 0, reads = 0;
  // Read-only pass: nobody writes, so plain reads are race-free.
#pragma omp parallel for num_threads(threads) schedule(static) reduction(+ : finds, reads)
  for (Index j = 0; j < k; ++j) {
    FindCounters c;
    roots[j] = view.root_of(vertices[j], c);
    finds += c.finds;
    reads += c.parent_reads;
  }
  // How many writes this pass does depends on the interleaving, so they are
  // not counted.
  if (f.compaction() != Compaction::none) {
#pragma omp parallel for num_threads(threads) schedule(static)
    for (Index j = 0; j < k; ++j) f.compress_concurrent(vertices[j], roots[j]);
  }
  if (work != nullptr) {
    work->finds += finds;
    work->parent_reads += reads;
  }
  return roots;
}

std::vector<Reservation> make_reservations(Forest& f, std::span<const Edge> edges, std::size_t l,
                                           std::size_t r, ReservationTable& table, int threads,
                                           WorkCounters* work) {
  if (l > r || r > edges.size()) throw ParameterError("window out of range");
  if (r > std::numeric_limits<ReservationTable::Position>::max()) {
    throw ParameterError("edge positions exceed 32 bits");
  }
  const std::size_t k = r - l;
  std::vector<VertexId> endpoints(2 * k);
  for (std::size_t j = 0; j < k; ++j) {
    endpoints[2 * j] = edges[l + j].u;
    endpoints[2 * j + 1] = edges[l + j].v;
  }
  const std::vector<VertexId> roots = bulk_find_roots(f, endpoints, threads, work);

  std::vector<Reservation> out(k);
  const Forest& view = f;
#pragma omp parallel for num_threads(threads) schedule(static)
  for (Index j = 0; j < static_cast<Index>(k); ++j) {
    const VertexId ru = roots[2 * j];
    const VertexId rv = roots[2 * j + 1];
    if (ru == rv) continue;
    const bool u_loses = view.root_less(ru, rv);
    out[j] = {u_loses ? ru : rv, u_loses ? rv : ru};
    table.reserve(out[j].loser, static_cast<ReservationTable::Position>(l + j));
  }
  return out;
}

FailureScan first_failure(const ReservationTable& table, std::span<const Reservation> window,
                          std::size_t l, std::size_t r, int threads) {
  check_threads(threads);
  if (l > r || window.size() < r - l) throw ParameterError("window out of range");
  std::atomic<std::size_t> stop{r};
  std::size_t failed = 0;
#pragma omp parallel for num_threads(threads) schedule(static) reduction(+ : failed)
  for (Index j = 0; j < static_cast<Index>(r - l); ++j) {
    const Reservation& res = window[j];
    if (!res.external()) continue;
    if (table.holder(res.loser) != static_cast<ReservationTable::Position>(l + j)) {
      write_min(stop, l + static_cast<std::size_t>(j));
      ++failed;
    }
  }
  return {stop.load(), failed};
}

std::vector<std::size_t> parallel_link_all(Forest& f, std::span<const Reservation> window,
                                           std::size_t l, std::size_t stop, int threads,
                                           WorkCounters* work) {
  check_threads(threads);
  if (l > stop || window.size() < stop - l) throw ParameterError("prefix out of range");

  std::vector<std::size_t> applied;
  std::unordered_map<VertexId, std::uint32_t> local;
  std::vector<VertexId> vertex_of;
  std::vector<char> is_loser;
  auto index_of = [&](VertexId root) {
    auto [it, fresh] = local.try_emplace(root, static_cast<std::uint32_t>(vertex_of.size()));
    if (fresh) {
      vertex_of.push_back(root);
      is_loser.push_back(0);
    }
    return it->second;
  };

  std::vector<std::pair<std::uint32_t, std::uint32_t>> links;
  for (std::size_t j = 0; j < stop - l; ++j) {
    const Reservation& res = window[j];
    if (!res.external()) continue;
    if (res.loser == res.winner || !f.is_root(res.loser) || !f.is_root(res.winner)) {
      throw ContractError("position " + std::to_string(l + j) + " does not join two roots");
    }
    const std::uint32_t a = index_of(res.loser);
    const std::uint32_t b = index_of(res.winner);
    if (is_loser[a]) {
      throw ContractError("root " + std::to_string(res.loser) + " reserved twice in one prefix");
    }
    is_loser[a] = 1;
    links.emplace_back(a, b);
    applied.push_back(l + j);
  }
  if (applied.empty()) return applied;

  LocalDsu dsu(vertex_of.size());
  for (auto [a, b] : links) dsu.unite(a, b);

  // Groups in order of their smallest local index; members in index order.
  std::vector<std::int64_t> group_of(vertex_of.size(), -1);
  std::vector<std::vector<VertexId>> groups;
  for (std::uint32_t x = 0; x < vertex_of.size(); ++x) {
    const std::uint32_t rep = dsu.find(x);
    if (group_of[rep] < 0) {
      group_of[rep] = static_cast<std::int64_t>(groups.size());
      groups.emplace_back();
    }
    groups[group_of[rep]].push_back(vertex_of[x]);
  }

  std::uint64_t writes = 0;
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1) reduction(+ : writes)
  for (Index g = 0; g < static_cast<Index>(groups.size()); ++g) {
    merge_range(f, groups[g], writes);
  }
  if (work != nullptr) work->link_writes += writes;
  return applied;
}

std::vector<std::size_t> parallel_link_all(Forest& f, std::span<const Edge> edges, std::size_t l,
                                           std::size_t stop, int threads) {
  if (l > stop || stop > edges.size()) throw ParameterError("prefix out of range");
  std::vector<Reservation> window(stop - l);
  for (std::size_t j = 0; j < window.size(); ++j) {
    const VertexId ru = f.root_of(edges[l + j].u);
    const VertexId rv = f.root_of(edges[l + j].v);
    if (ru == rv) continue;
    const bool u_loses = f.root_less(ru, rv);
    window[j] = {u_loses ? ru : rv, u_loses ? rv : ru};
  }
  return parallel_link_all(f, window, l, stop, threads);
}

WindowedRun run_windowed(const EdgeSequence& seq, const LinkingStrategy& strategy,
                         const WindowPolicy& policy, int threads, const WindowedOptions& options) {
  check_threads(threads);
  policy.validate();
  validate(seq);
  const std::size_t E = seq.size();
  if (E >= std::numeric_limits<ReservationTable::Position>::max()) {
    throw ParameterError("too many edges for 32-bit positions");
  }
  omp_set_dynamic(0);

  WindowedRun run{{}, Forest(seq.vertex_count, strategy, options.compaction)};
  Forest& f = run.forest;
  RunStats& stats = run.stats;
  ReservationTable table(seq.vertex_count);
  const std::span<const Edge> edges(seq.edges);

  std::size_t S = policy.initial;
  std::size_t i = 0;
  while (i < E) {
    const std::size_t r = S >= E - i ? E : i + S;
    table.begin_round();
    const std::vector<Reservation> window = make_reservations(f, edges, i, r, table, threads, &stats.work);
    const FailureScan scan = first_failure(table, window, i, r, threads);

    IterationView view{stats.iterations, i, scan.stop, r, S, scan.failed};
    if (options.on_prefix) options.on_prefix(f, view);

    std::vector<std::size_t> applied = parallel_link_all(f, window, i, scan.stop, threads, &stats.work);
    stats.success_set.insert(stats.success_set.end(), applied.begin(), applied.end());
    std::size_t executed = scan.stop - i;

    if (options.detach_stop_edge && scan.stop < r) {
      const Edge& e = edges[scan.stop];
      FindCounters c;
      f.root_of(e.u, c);
      f.root_of(e.v, c);
      stats.work.finds += c.finds;
      stats.work.parent_reads += c.parent_reads;
      if (f.unite(e.u, e.v).merged) {
        ++stats.work.link_writes;
        stats.success_set.push_back(scan.stop);
      }
      ++executed;
    }

    stats.executed_per_iteration.push_back(executed);
    stats.failed_per_iteration.push_back(scan.failed);
    stats.window_per_iteration.push_back(S);
    stats.failed_reservation_events += scan.failed;
    ++stats.iterations;
    if (options.on_iteration) options.on_iteration(f, view);

    if (policy.kind == WindowPolicy::Kind::adaptive) {
      if (scan.failed == 0) {
        S = S > policy.max_size / 2 ? policy.max_size : 2 * S;
      } else if (scan.stop - i < S / 2) {
        S = std::max(S / 2, policy.min_size);
      }
    }
    i += executed;
  }
  return run;
}

DeterminismReport compare_with_sequential(const EdgeSequence& seq, const LinkingStrategy& strategy,
                                          const WindowPolicy& policy, int threads,
                                          const WindowedOptions& options) {
  DeterminismReport report;
  report.sequential = run_sequential(seq, strategy, options.compaction).success_set;
  report.parallel = run_windowed(seq, strategy, policy, threads, options).stats.success_set;
  const auto [a, b] = std::mismatch(report.sequential.begin(), report.sequential.end(),
                                    report.parallel.begin(), report.parallel.end());
  report.identical = a == report.sequential.end() && b == report.parallel.end();
  if (!report.identical) {
    report.first_difference = static_cast<std::size_t>(a - report.sequential.begin());
  }
  return report;
}

bool verify_internal_determinism(const EdgeSequence& seq, const LinkingStrategy& strategy,
                                 const WindowPolicy& policy, int threads,
                                 const WindowedOptions& options) {
  return compare_with_sequential(seq, strategy, policy, threads, options).identical;
}

void write_run_rows(const RunStats& stats, std::ostream& out) {
  for (std::size_t k = 0; k < stats.iterations; ++k) {
    out << k << ',' << stats.executed_per_iteration[k] << ',' << stats.failed_per_iteration[k] << ','
        << stats.window_per_iteration[k] << '\n';
  }
}

}  // namespace detuf
