#pragma once

#include <array>
#include <utility>
#include <vector>

#include "mgwb/numcore/matrix.hpp"
#include "mgwb/numcore/tape.hpp"

namespace mgwb {

// One node set, two edge channels (SC weight, FC correlation) carried as
// attributes on the union edge list. Immutable after finalize(); metric
// operations are pure.
struct MultiplexGraph {
  int n = 0;
  int k = 0;  // community count
  Matrix features;                          // n x 6
  std::vector<std::pair<int, int>> edges;   // u < v, lexicographically sorted
  Matrix edge_attrs;                        // m x 2: [SC weight, FC corr]
  std::vector<std::array<bool, 2>> channel_present;
  std::vector<int> community;  // 0..k-1
  std::vector<int> site;       // 0..2

  int edge_count() const { return int(edges.size()); }

  // validates invariants and builds the union adjacency
  void finalize();

  const Csr& adjacency() const { return adj_; }
  int degree(int v) const { return adj_.degree(v); }
  // sorted neighbor list
  const int* neighbors_begin(int v) const { return adj_.targets.data() + adj_.offsets[v]; }
  const int* neighbors_end(int v) const { return adj_.targets.data() + adj_.offsets[v + 1]; }
  bool has_edge(int u, int v) const;

 private:
  Csr adj_;
};

// Builds a CSR union adjacency (both directions, sorted targets) from an
// undirected edge list.
Csr build_adjacency(int n, const std::vector<std::pair<int, int>>& edges);

// node ids of the largest connected component (ties: first encountered)
std::vector<int> largest_component(const MultiplexGraph& g);

bool is_connected(const MultiplexGraph& g);

}  // namespace mgwb
