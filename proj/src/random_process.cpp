#include "detuf/random_process.hpp"

#include <algorithm>
#include <ostream>

#include "absl/container/flat_hash_map.h"

#include "detuf/edge_file.hpp"
#include "detuf/errors.hpp"

namespace detuf {
namespace {

std::uint64_t choose2(std::uint64_t k) noexcept { return k < 2 ? 0 : k * (k - 1) / 2; }

// Incremental collision counts over the contracted multigraph of active
// external edges. adj_[X][Y] is the number of active edges between roots X
// and Y; m_[X] counts those whose smaller root is X. A merge touches only the
// adjacency of the two merged roots, so a whole run costs
// O(|E| + sum over merges of the contracted degrees).
class CollisionTracker {
 public:
  CollisionTracker(const Forest& forest, std::span<const Edge> edges)
      : f_(forest),
        adj_(forest.vertex_count()),
        m_(forest.vertex_count(), 0),
        d_(forest.vertex_count(), 0) {
    for (const Edge& e : edges) {
      ++d_[e.u];
      ++d_[e.v];
    }
    for (VertexId x = 0; x < adj_.size(); ++x) adj_[x].reserve(std::min<std::uint64_t>(d_[x], adj_.size()));
    std::fill(d_.begin(), d_.end(), 0);
    for (const Edge& e : edges) {
      ++adj_[e.u][e.v];
      ++adj_[e.v][e.u];
      ++d_[e.u];
      ++d_[e.v];
      ++m_[f_.root_less(e.u, e.v) ? e.u : e.v];
    }
    for (VertexId x = 0; x < adj_.size(); ++x) {
      strict_sum_ += m_[x] * (m_[x] - (m_[x] > 0));
      shared_sum_ += choose2(d_[x]);
      for (const auto& [y, c] : adj_[x]) {
        if (y > x) parallel_sum_ += choose2(c);
      }
    }
  }

  std::uint64_t strict_pairs() const noexcept { return strict_sum_ / 2; }
  std::uint64_t simplified_pairs() const noexcept { return shared_sum_ - parallel_sum_; }

  // The external edge between roots ru and rv leaves the active set.
  void remove_active(VertexId ru, VertexId rv) {
    auto it = adj_[ru].find(rv);
    const std::uint32_t c = it->second;
    parallel_sum_ -= c - 1;
    if (c == 1) {
      adj_[ru].erase(it);
      adj_[rv].erase(ru);
    } else {
      --it->second;
      --adj_[rv][ru];
    }
    shared_sum_ -= (d_[ru] - 1) + (d_[rv] - 1);
    --d_[ru];
    --d_[rv];
    adjust_m(f_.root_less(ru, rv) ? ru : rv, -1);
  }

  // Called after `loser` was linked below `winner`; the keys are the values
  // both roots had before the link.
  void merge(VertexId loser, VertexId winner, const RootKey& loser_old, const RootKey& winner_old) {
    const LinkingStrategy& order = f_.strategy();
    const RootKey winner_new = f_.key(winner);
    auto& row_a = adj_[loser];
    auto& row_b = adj_[winner];

    std::uint64_t c_ab = 0;
    for (const auto& [y, c] : row_a) {
      if (y == winner) {
        c_ab = c;
        continue;
      }
      if (order.less(f_.key(y), loser_old)) adjust_m(y, -static_cast<std::int64_t>(c));
      parallel_sum_ -= choose2(c);
    }
    for (const auto& [y, c] : row_b) {
      if (y == loser) continue;
      if (order.less(f_.key(y), winner_old)) adjust_m(y, -static_cast<std::int64_t>(c));
      parallel_sum_ -= choose2(c);
    }
    parallel_sum_ -= choose2(c_ab);
    set_m(loser, 0);

    shared_sum_ -= choose2(d_[loser]) + choose2(d_[winner]);
    d_[winner] = d_[winner] + d_[loser] - 2 * c_ab;
    d_[loser] = 0;
    shared_sum_ += choose2(d_[winner]);

    row_b.erase(loser);
    row_b.reserve(row_b.size() + row_a.size());
    for (const auto& [y, c] : row_a) {
      if (y == winner) continue;
      auto& row_y = adj_[y];
      row_y.erase(loser);
      row_y[winner] += c;
      row_b[y] += c;
    }
    Row().swap(row_a);

    std::uint64_t m_winner = 0;
    for (const auto& [y, c] : row_b) {
      parallel_sum_ += choose2(c);
      if (order.less(f_.key(y), winner_new)) {
        adjust_m(y, static_cast<std::int64_t>(c));
      } else {
        m_winner += c;
      }
    }
    set_m(winner, m_winner);
  }

 private:
  using Row = absl::flat_hash_map<VertexId, std::uint32_t>;

  void set_m(VertexId x, std::uint64_t value) noexcept {
    strict_sum_ -= m_[x] * (m_[x] - (m_[x] > 0));
    m_[x] = value;
    strict_sum_ += m_[x] * (m_[x] - (m_[x] > 0));
  }
  void adjust_m(VertexId x, std::int64_t delta) noexcept {
    set_m(x, static_cast<std::uint64_t>(static_cast<std::int64_t>(m_[x]) + delta));
  }

  const Forest& f_;
  std::vector<Row> adj_;
  std::vector<std::uint64_t> m_;
  std::vector<std::uint64_t> d_;
  std::uint64_t strict_sum_ = 0;    // sum of m (m - 1)
  std::uint64_t shared_sum_ = 0;    // sum of C(d, 2)
  std::uint64_t parallel_sum_ = 0;  // sum over root pairs of C(c, 2)
};

}  // namespace

ProcessTrace run_random_process(const EdgeSequence& seq, const LinkingStrategy& strategy, Rng& rng,
                                ProcessOptions options) {
  return run_process_in_order(shuffle(seq, rng), strategy, options);
}

ProcessTrace run_process_in_order(EdgeSequence ordered, const LinkingStrategy& strategy,
                                  ProcessOptions options) {
  validate(ordered);
  if (ordered.empty()) throw ParameterError("random process needs at least one edge");

  const std::size_t E = ordered.size();
  const double total = static_cast<double>(E);
  Forest f(ordered.vertex_count, strategy, Compaction::full);
  CollisionTracker tracker(f, ordered.edges);

  // Active-edge endpoints per root: linking a root deepens exactly these.
  std::vector<std::uint64_t> endpoints(ordered.vertex_count, 0);
  for (const Edge& e : ordered.edges) {
    ++endpoints[e.u];
    ++endpoints[e.v];
  }

  ProcessTrace trace;
  trace.vertex_count = ordered.vertex_count;
  trace.edge_count = E;
  if (options.record_steps) {
    trace.steps.reserve(E);
    trace.frozen.reserve(E - 1);
  }

  std::uint64_t active_ranks = 0;
  long double frozen_sum = 0.0L;
  long double sum_p = 0.0L;
  long double sum_half = 0.0L;
  long double sum_simplified = 0.0L;
  std::size_t components = ordered.vertex_count;

  for (std::size_t t = 0; t < E; ++t) {
    ProcessStep step;
    step.t = t;
    step.component_count = components;
    step.colliding_pairs = tracker.strict_pairs();
    step.simplified_pairs = tracker.simplified_pairs();
    step.active_pairs = choose2(E - t);
    step.phi = static_cast<double>(total / static_cast<double>(E - t) *
                                       static_cast<long double>(active_ranks) +
                                   frozen_sum);
    const double p = step.p_exact();
    sum_p += p;
    if (t <= E / 2) sum_half += p;
    sum_simplified += step.p_simplified();
    if (t + 1 == E) trace.phi_final = step.phi;
    if (options.record_steps) trace.steps.push_back(step);

    const Edge& e = ordered.edges[t];
    active_ranks -= f.uncompressed_depth(e.u) + f.uncompressed_depth(e.v);
    const VertexId ru = f.find_root(e.u);
    const VertexId rv = f.find_root(e.v);
    --endpoints[ru];
    --endpoints[rv];
    if (ru != rv) {
      tracker.remove_active(ru, rv);
      const bool u_loses = f.root_less(ru, rv);
      const VertexId loser = u_loses ? ru : rv;
      const VertexId winner = u_loses ? rv : ru;
      const RootKey loser_key = f.key(loser);
      const RootKey winner_key = f.key(winner);
      f.link(loser, winner);
      active_ranks += endpoints[loser];
      endpoints[winner] += endpoints[loser];
      endpoints[loser] = 0;
      tracker.merge(loser, winner, loser_key, winner_key);
      --components;
    }

    const std::size_t i = t + 1;
    if (i < E) {
      const auto rank = static_cast<std::uint32_t>(f.uncompressed_depth(e.u) + f.uncompressed_depth(e.v));
      const double mult = total / static_cast<double>(E - i);
      frozen_sum += static_cast<long double>(mult) * rank;
      if (options.record_steps) trace.frozen.push_back({i, rank, mult});
    }
  }

  trace.sum_p = static_cast<double>(sum_p);
  trace.sum_p_first_half = static_cast<double>(sum_half);
  trace.sum_p_simplified = static_cast<double>(sum_simplified);
  trace.max_depth = f.max_uncompressed_depth();
  if (options.record_steps) trace.order = std::move(ordered);
  return trace;
}

void write_trace_rows(const ProcessTrace& trace, std::ostream& out, CollisionDefinition def) {
  for (const ProcessStep& s : trace.steps) {
    const std::uint64_t pairs =
        def == CollisionDefinition::strict ? s.colliding_pairs : s.simplified_pairs;
    out << s.t << ',' << s.component_count << ',' << format_double(s.p(def)) << ','
        << format_double(s.phi) << ',' << pairs << '\n';
  }
}

}  // namespace detuf
