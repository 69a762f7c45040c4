#pragma once

#include <cstddef>
#include <vector>

#include "detuf/forest.hpp"
#include "detuf/graph.hpp"
#include "detuf/windowed.hpp"

namespace detuf {

struct MstResult {
  std::vector<std::size_t> mst_edges;  // positions in the input, increasing
  double total_weight = 0.0;
};

/// Minimum spanning forest: sorts by weight, then runs the windowed algorithm.
/// Every edge needs a weight and all weights must differ (ParameterError).
MstResult parallel_kruskal(const EdgeSequence& seq, const LinkingStrategy& strategy,
                           const WindowPolicy& policy, int threads);

/// Same result through plain sequential unions.
MstResult sequential_kruskal(const EdgeSequence& seq, const LinkingStrategy& strategy);

}  // namespace detuf
