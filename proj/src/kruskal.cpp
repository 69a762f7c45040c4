#include "detuf/kruskal.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "detuf/errors.hpp"

namespace detuf {
namespace {

struct Sorted {
  EdgeSequence seq;
  std::vector<std::size_t> origin;  // sorted position -> input position
};

Sorted sort_by_weight(const EdgeSequence& seq) {
  validate(seq);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!seq.edges[i].has_weight()) {
      throw ParameterError("edge " + std::to_string(i) + " has no weight");
    }
  }
  Sorted out;
  out.origin.resize(seq.size());
  std::iota(out.origin.begin(), out.origin.end(), std::size_t{0});
  std::sort(out.origin.begin(), out.origin.end(), [&](std::size_t a, std::size_t b) {
    return seq.edges[a].weight < seq.edges[b].weight;
  });
  for (std::size_t k = 1; k < out.origin.size(); ++k) {
    if (seq.edges[out.origin[k - 1]].weight == seq.edges[out.origin[k]].weight) {
      throw ParameterError("duplicate weight " + std::to_string(seq.edges[out.origin[k]].weight));
    }
  }
  out.seq.vertex_count = seq.vertex_count;
  out.seq.provenance = seq.provenance;
  out.seq.edges.reserve(seq.size());
  for (std::size_t p : out.origin) out.seq.edges.push_back(seq.edges[p]);
  return out;
}

MstResult collect(const EdgeSequence& seq, const Sorted& sorted,
                  const std::vector<std::size_t>& successes) {
  MstResult r;
  for (std::size_t s : successes) r.mst_edges.push_back(sorted.origin[s]);
  std::sort(r.mst_edges.begin(), r.mst_edges.end());
  // Summed in weight order so both variants round identically.
  for (std::size_t s : successes) r.total_weight += seq.edges[sorted.origin[s]].weight;
  return r;
}

}  // namespace

MstResult parallel_kruskal(const EdgeSequence& seq, const LinkingStrategy& strategy,
                           const WindowPolicy& policy, int threads) {
  const Sorted sorted = sort_by_weight(seq);
  const WindowedRun run = run_windowed(sorted.seq, strategy, policy, threads);
  return collect(seq, sorted, run.stats.success_set);
}

MstResult sequential_kruskal(const EdgeSequence& seq, const LinkingStrategy& strategy) {
  const Sorted sorted = sort_by_weight(seq);
  return collect(seq, sorted, run_sequential(sorted.seq, strategy).success_set);
}

}  // namespace detuf
