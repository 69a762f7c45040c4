#include "detuf/contention.hpp"

#include <algorithm>
#include <ostream>

#include "detuf/collision.hpp"
#include "detuf/errors.hpp"

namespace detuf {

ContentionRun simulate_contention_ordered(const EdgeSequence& ordered,
                                          const LinkingStrategy& strategy, std::size_t T) {
  if (T < 2) throw ParameterError("contention model needs at least 2 threads");
  validate(ordered);
  Forest f(ordered.vertex_count, strategy);
  ContentionRun run;
  run.T = T;
  const std::span<const Edge> edges(ordered.edges);
  for (std::size_t i = 0; i < edges.size(); i += T) {
    const auto batch = edges.subspan(i, std::min(T, edges.size() - i));
    const std::uint64_t pairs = count_colliding_pairs(f, batch);
    run.per_iteration.push_back(pairs);
    run.events += pairs;
    for (const Edge& e : batch) f.unite(e.u, e.v);
  }
  return run;
}

ContentionRun simulate_contention(const EdgeSequence& seq, const LinkingStrategy& strategy,
                                  std::size_t T, Rng& rng) {
  return simulate_contention_ordered(shuffle(seq, rng), strategy, T);
}

std::vector<ContentionSweepRow> sweep_contention(const EdgeSequence& seq,
                                                 const LinkingStrategy& strategy,
                                                 std::span<const std::size_t> T_list,
                                                 std::size_t seeds, const Rng& master) {
  if (seeds == 0) throw ParameterError("sweep needs at least one seed");
  std::vector<ContentionSweepRow> rows;
  for (std::size_t T : T_list) {
    ContentionSweepRow row;
    row.T = T;
    long double sum = 0.0L;
    for (std::size_t k = 0; k < seeds; ++k) {
      Rng rng = master.split(k);
      const std::uint64_t events = simulate_contention(seq, strategy, T, rng).events;
      row.events.push_back(events);
      sum += events;
    }
    row.mean_events = static_cast<double>(sum / seeds);
    row.per_T_squared = row.mean_events / static_cast<double>(T * T);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_contention_rows(std::span<const ContentionSweepRow> rows, std::ostream& out) {
  for (const ContentionSweepRow& row : rows) {
    for (std::size_t k = 0; k < row.events.size(); ++k) {
      out << row.T << ',' << k << ',' << row.events[k] << '\n';
    }
  }
}

}  // namespace detuf
