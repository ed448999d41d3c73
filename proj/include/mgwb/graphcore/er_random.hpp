#pragma once

#include <cstdint>

#include "mgwb/graphcore/multiplex_graph.hpp"

namespace mgwb {

// Uniform random simple graph with exactly n nodes and m edges, used as the
// degree-matched random reference for small-world comparisons. The edge
// attributes are placeholder SC weights of 1.
MultiplexGraph er_reference(int n, long m, uint64_t seed);

}  // namespace mgwb
