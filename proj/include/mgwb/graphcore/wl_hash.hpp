#pragma once

#include <vector>

#include "mgwb/graphcore/multiplex_graph.hpp"

namespace mgwb {

// Weisfeiler-Lehman subtree feature of the induced subgraph: initial labels
// are degree buckets (0..4, >=5), each iteration rehashes (label, sorted
// neighbor labels), and the histogram of all labels across iterations is
// hashed into dim bins and L1-normalized. Invariant to node-id permutation.
std::vector<double> wl_hash(const MultiplexGraph& g, const std::vector<int>& subset,
                            int iterations = 3, int dim = 128);

}  // namespace mgwb
