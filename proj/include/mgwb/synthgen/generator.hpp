#pragma once

#include <cstdint>
#include <vector>

#include "mgwb/graphcore/multiplex_graph.hpp"
#include "mgwb/graphcore/task_bundle.hpp"
#include "mgwb/rng.hpp"
#include "mgwb/synthgen/gen_config.hpp"

namespace mgwb {

// Per-community latent spaces: morphometric (A) and connectivity (B).
struct Latents {
  Matrix mu_a;  // k x 3 community centers
  Matrix mu_b;  // k x 3
  Matrix z_a;   // n x 3 per-node draws
  Matrix z_b;   // n x 3
};

struct WeightedEdge {
  int u, v;  // u < v
  double w;
};

Latents sample_latents(const GenConfig& cfg, int k, int n,
                       const std::vector<int>& community, Rng rng);

// six features: volume, thickness (log-normal from z_a), FA, MD (sigmoid
// from z_b), two linear auxiliaries; site offsets added per (site, feature)
Matrix node_features(const Latents& latents, const std::vector<int>& sites,
                     const GenConfig& cfg, Rng rng);

// independent Bernoulli per unordered pair with assortative similarity
// logits; weights log-normal
std::vector<WeightedEdge> sc_edges(const Latents& latents,
                                   const std::vector<int>& community,
                                   const GenConfig& cfg, Rng rng);

// removes floor(fraction * |sc|) uniformly chosen edges from the SC channel
std::vector<WeightedEdge> apply_missing_sc(std::vector<WeightedEdge> sc,
                                           double fraction, Rng rng);

// n x T AR(1) series with shared community drivers and unit innovations
Matrix simulate_timeseries(const std::vector<int>& community, int k,
                           const GenConfig& cfg, Rng rng);

// discrete-Fourier brick-wall bandpass along rows; output real, zero mean
Matrix bandpass(const Matrix& series, double band_lo, double band_hi, double dt);

// Pearson correlations; per node keep its top-k partners, symmetrized by
// union; w = correlation
std::vector<WeightedEdge> fc_edges(const Matrix& filtered, int top_k);

// the full pipeline; bit-identical for equal (cfg, seed)
MultiplexGraph generate_graph(const GenConfig& cfg, uint64_t seed);

// node labels + stratified split, link folds with matched negatives,
// subgraph regression targets
TaskBundle make_task_bundle(const MultiplexGraph& g, const GenConfig& cfg, Rng rng);

}  // namespace mgwb
