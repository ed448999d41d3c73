#pragma once

#include <cstdint>
#include <string>

namespace mgwb {

// Generator knobs. The SC coefficients, latent spread and FC retention are
// calibrated defaults chosen so the synthesized corpus lands in the target
// edge-count band with small-world structure; all of them are addressable
// from the JSON config file.
struct GenConfig {
  int node_min = 700;
  int node_max = 900;
  int community_min = 6;
  int community_max = 10;
  int site_count = 3;

  // community latent spaces (3-d morphometry, 3-d connectivity)
  double latent_spread = 0.45;

  // SC channel: P(edge) = sigmoid(beta_comm*same + beta_sim*cos(zB) + bias)
  double beta_comm = 0.3;
  double beta_sim = 1.0;
  double bias = -6.55;
  double sc_weight_mu = 0.0;
  double sc_weight_sigma = 0.5;
  double missing_sc_fraction = 0.25;

  // functional channel: AR(1) series with community drivers
  int ts_length = 400;
  double ts_dt = 1.0;  // seconds
  double ar_rho = 0.5;
  double driver_weight = 0.7;
  double band_lo = 0.10;  // Hz
  double band_hi = 0.20;
  int fc_top_k = 11;

  // node features
  double feature_noise_std = 0.3;
  double site_offset_std = 0.1;

  void validate() const;
};

std::string gen_config_to_json(const GenConfig& cfg);
GenConfig gen_config_from_json(const std::string& text);

}  // namespace mgwb
