#include "mgwb/synthgen/gen_config.hpp"

#include <stdexcept>

#include <json.hpp>

namespace mgwb {

void GenConfig::validate() const {
  if (node_min < 3 || node_max < node_min)
    throw std::invalid_argument("gen config: bad node range");
  if (community_min < 1 || community_max < community_min)
    throw std::invalid_argument("gen config: bad community range");
  if (site_count < 1) throw std::invalid_argument("gen config: bad site count");
  if (missing_sc_fraction < 0.0 || missing_sc_fraction >= 1.0)
    throw std::invalid_argument("gen config: missing fraction outside [0,1)");
  double nyquist = 0.5 / ts_dt;
  if (!(0.0 < band_lo && band_lo < band_hi && band_hi < nyquist))
    throw std::invalid_argument("gen config: band outside (0, Nyquist)");
  if (fc_top_k < 1) throw std::invalid_argument("gen config: top-k must be >= 1");
  if (ts_length < 128) throw std::invalid_argument("gen config: ts_length < 128");
}

namespace {
using json = nlohmann::ordered_json;
}

std::string gen_config_to_json(const GenConfig& c) {
  json j;
  j["node_min"] = c.node_min;
  j["node_max"] = c.node_max;
  j["community_min"] = c.community_min;
  j["community_max"] = c.community_max;
  j["site_count"] = c.site_count;
  j["latent_spread"] = c.latent_spread;
  j["beta_comm"] = c.beta_comm;
  j["beta_sim"] = c.beta_sim;
  j["bias"] = c.bias;
  j["sc_weight_mu"] = c.sc_weight_mu;
  j["sc_weight_sigma"] = c.sc_weight_sigma;
  j["missing_sc_fraction"] = c.missing_sc_fraction;
  j["ts_length"] = c.ts_length;
  j["ts_dt"] = c.ts_dt;
  j["ar_rho"] = c.ar_rho;
  j["driver_weight"] = c.driver_weight;
  j["band_lo"] = c.band_lo;
  j["band_hi"] = c.band_hi;
  j["fc_top_k"] = c.fc_top_k;
  j["feature_noise_std"] = c.feature_noise_std;
  j["site_offset_std"] = c.site_offset_std;
  return j.dump(2);
}

GenConfig gen_config_from_json(const std::string& text) {
  json j = json::parse(text);
  GenConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("node_min", c.node_min);
  get("node_max", c.node_max);
  get("community_min", c.community_min);
  get("community_max", c.community_max);
  get("site_count", c.site_count);
  get("latent_spread", c.latent_spread);
  get("beta_comm", c.beta_comm);
  get("beta_sim", c.beta_sim);
  get("bias", c.bias);
  get("sc_weight_mu", c.sc_weight_mu);
  get("sc_weight_sigma", c.sc_weight_sigma);
  get("missing_sc_fraction", c.missing_sc_fraction);
  get("ts_length", c.ts_length);
  get("ts_dt", c.ts_dt);
  get("ar_rho", c.ar_rho);
  get("driver_weight", c.driver_weight);
  get("band_lo", c.band_lo);
  get("band_hi", c.band_hi);
  get("fc_top_k", c.fc_top_k);
  get("feature_noise_std", c.feature_noise_std);
  get("site_offset_std", c.site_offset_std);
  c.validate();
  return c;
}

}  // namespace mgwb
