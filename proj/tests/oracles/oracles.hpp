#pragma once

// Test-only reference computations. None of these share code paths with the
// library's implementations they are compared against.

#include <cstdint>
#include <random>
#include <vector>

#include "gridline/fault_tree.hpp"
#include "gridline/network.hpp"

namespace gridline::oracle {

/// Betweenness by listing every shortest path between every unordered pair
/// and counting, for each node, the share of paths through it. Normalized by
/// (N-1)(N-2)/2. Exponential in the worst case; fine for N <= 20.
std::vector<double> betweenness_by_enumeration(const TransitNetwork& network);

/// Connected graph on n nodes: a random spanning tree plus extra edges with
/// probability `extra`. Node ids are "n0".."n{n-1}"; profiles are random valid.
TransitNetwork random_connected_network(std::mt19937_64& rng, int n, double extra);

/// A tree with `leaves` random leaves and labels "L0".."L{k-1}".
FaultTree random_fault_tree(std::mt19937_64& rng, int leaves);

/// P(any leaf succeeds) by inclusion-exclusion over all non-empty subsets.
double or_gate_inclusion_exclusion(const std::vector<double>& probabilities);

/// Simple graphs used by several suites.
TransitNetwork path_network(int n);
TransitNetwork star_network(int leaves);
TransitNetwork complete_network(int n);

}  // namespace gridline::oracle
