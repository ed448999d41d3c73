#pragma once

#include <vector>

#include "mgwb/graphcore/multiplex_graph.hpp"

namespace mgwb {

// Classical metrics on the unweighted union edge set.

// mean of local clustering coefficients; nodes of degree < 2 contribute 0
double avg_clustering(const MultiplexGraph& g);

// mean BFS hop distance over unordered reachable pairs of the largest
// connected component; throws for n < 2
double avg_shortest_path(const MultiplexGraph& g);

// power iteration with uniform teleport; entries sum to 1 within tol
std::vector<double> pagerank(const MultiplexGraph& g, double damping = 0.85,
                             double tol = 1e-9);

// |N(u) cap N(v)| / |N(u) cup N(v)|; 0 when the union is empty
double jaccard(const MultiplexGraph& g, int u, int v);

// internal edges / (s*(s-1)/2) over the subset (sorted unique ids)
double density(const MultiplexGraph& g, const std::vector<int>& subset);

// cut / min(vol(S), vol(V\S)) with unweighted degrees; 1 when the smaller
// volume is 0
double conductance(const MultiplexGraph& g, const std::vector<int>& subset);

}  // namespace mgwb
