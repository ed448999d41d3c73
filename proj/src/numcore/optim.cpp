#include "mgwb/numcore/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace mgwb {

AdamState AdamState::init(const ParamSet& params, AdamConfig cfg) {
  AdamState s;
  s.cfg = cfg;
  for (const auto& [name, p] : params)
    s.moments.emplace(name, std::make_pair(Matrix::zeros(p.rows, p.cols),
                                           Matrix::zeros(p.rows, p.cols)));
  return s;
}

double global_norm(const GradSet& grads) {
  double s = 0.0;
  for (const auto& [name, g] : grads)
    for (double v : g.data) s += v * v;
  return std::sqrt(s);
}

double clip_global_norm(GradSet& grads, double max_norm) {
  for (const auto& [name, g] : grads)
    if (!g.all_finite())
      throw std::runtime_error("clip_global_norm: non-finite gradient in '" +
                               name + "'");
  double norm = global_norm(grads);
  if (norm > max_norm) {
    double s = max_norm / norm;
    for (auto& [name, g] : grads)
      for (double& v : g.data) v *= s;
  }
  return norm;
}

void adam_step(ParamSet& params, const GradSet& grads, AdamState& state) {
  const AdamConfig& c = state.cfg;
  state.step += 1;
  double bc1 = 1.0 - std::pow(c.beta1, double(state.step));
  double bc2 = 1.0 - std::pow(c.beta2, double(state.step));
  for (auto& [name, p] : params) {
    auto git = grads.find(name);
    if (git == grads.end())
      throw std::invalid_argument("adam_step: missing gradient for '" + name + "'");
    const Matrix& g = git->second;
    auto mit = state.moments.find(name);
    if (mit == state.moments.end())
      throw std::invalid_argument("adam_step: missing state for '" + name + "'");
    Matrix& m = mit->second.first;
    Matrix& v = mit->second.second;
    if (!p.same_shape(g) || !p.same_shape(m))
      throw std::invalid_argument("adam_step: shape mismatch for '" + name +
                                  "': param " + p.shape_str() + " grad " +
                                  g.shape_str());
    for (size_t i = 0; i < p.size(); ++i) {
      m.data[i] = c.beta1 * m.data[i] + (1.0 - c.beta1) * g.data[i];
      v.data[i] = c.beta2 * v.data[i] + (1.0 - c.beta2) * g.data[i] * g.data[i];
      double mhat = m.data[i] / bc1;
      double vhat = v.data[i] / bc2;
      p.data[i] -= c.lr * c.weight_decay * p.data[i];
      p.data[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
    }
  }
}

}  // namespace mgwb
