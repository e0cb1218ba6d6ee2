#pragma once

#include <cstddef>
#include <vector>

namespace commtask {

/// Undirected graph as a symmetric adjacency matrix (diagonal ignored).
using Adjacency = std::vector<std::vector<bool>>;

/// A maximum clique, vertices in increasing order. Among maximum cliques the
/// lexicographically smallest is returned. Branch and bound with a greedy
/// colouring bound.
std::vector<std::size_t> maximum_clique(const Adjacency &adj);

} // namespace commtask
