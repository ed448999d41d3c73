#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "mgwb/numcore/matrix.hpp"

namespace mgwb {

// Named parameter tensors. std::map keeps iteration order deterministic.
using ParamSet = std::map<std::string, Matrix>;
using GradSet = std::map<std::string, Matrix>;

struct AdamConfig {
  double lr = 1e-3;
  double weight_decay = 1e-5;  // decoupled, applied to parameters
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig cfg;
  int64_t step = 0;
  std::map<std::string, std::pair<Matrix, Matrix>> moments;  // first, second

  static AdamState init(const ParamSet& params, AdamConfig cfg = {});
};

double global_norm(const GradSet& grads);

// Scales all gradients by max_norm/norm when the global L2 norm exceeds
// max_norm. Returns the pre-clip norm. Throws on non-finite gradients,
// naming the offending parameter.
double clip_global_norm(GradSet& grads, double max_norm = 1.0);

void adam_step(ParamSet& params, const GradSet& grads, AdamState& state);

}  // namespace mgwb
