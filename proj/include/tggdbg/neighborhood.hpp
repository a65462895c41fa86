#pragma once

#include <set>
#include <string>

#include "tggdbg/triple_graph.hpp"

namespace tgg {

inline constexpr int kMaxNeighborhood = 3;

/// Nodes within undirected distance `k` of any seed, where both edges and
/// correspondence links count as adjacency, together with every edge and
/// corr link whose endpoints are both inside. Seeds have distance 0.
///
/// Throws Error(Argument) if k is outside [0, 3] or a seed is not a node.
std::set<std::string> kNeighborhood(const TripleGraph& triple,
                                    const std::set<std::string>& seeds, int k);

}  // namespace tgg
