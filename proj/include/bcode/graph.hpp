#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bcode/network.hpp"

namespace bcode {

// Simple undirected graph with bitset adjacency rows; no self-loops.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(int n);

  int size() const { return n_; }
  void add_edge(int a, int b);
  bool has_edge(int a, int b) const;
  int degree(int v) const;
  std::vector<int> neighbors(int v) const;

 private:
  friend std::pair<int, int> width_along(const UndirectedGraph& g,
                                         const std::vector<int>& sequence);
  friend class EliminationWorkspace;
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> bits_;  // n_ rows of words_ words
};

struct Ordering {
  std::vector<int> sequence;  // a permutation of 0..n-1; buckets are
                              // processed from the back of the sequence
  int width = 0;
  int induced_width = 0;
};

enum class OrderingHeuristic { MinDegree, MinFill };

// Parents of every node married, arrows dropped.
UndirectedGraph moral_graph(const BeliefNetwork& net);

// (width, induced width) of the sequence: processing nodes from last to
// first, each node's earlier neighbors are counted and connected.
std::pair<int, int> width_along(const UndirectedGraph& g, const std::vector<int>& sequence);

// Greedy elimination ordering (ties broken by smallest id); the returned
// sequence lists the last-eliminated variable first.
Ordering find_ordering(const UndirectedGraph& g, OrderingHeuristic heuristic);

// Wraps a caller-supplied sequence, measuring its widths.
Ordering make_ordering(const UndirectedGraph& g, std::vector<int> sequence);

}  // namespace bcode
