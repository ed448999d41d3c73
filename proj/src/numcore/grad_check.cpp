#include "mgwb/numcore/grad_check.hpp"

#include <cmath>
#include <stdexcept>

namespace mgwb {

namespace {

struct Probe {
  double value;
  uint64_t relu_hash;
};

Probe eval_once(const TapedLoss& loss_fn, const ParamSet& params, SgFreeze* ctx) {
  Tape t;
  std::map<std::string, Var> leaves;
  for (const auto& [name, p] : params) leaves.emplace(name, t.leaf(p));
  Var loss = loss_fn(t, leaves, ctx);
  return Probe{t.value(loss).as_scalar(), t.relu_sign_hash()};
}

}  // namespace

GradCheckReport grad_check(const TapedLoss& loss_fn, const ParamSet& params,
                           double step, int samples_per_param, Rng rng) {
  // analytic pass; records stop-gradient values for replay
  SgFreeze ctx;
  ctx.start_record();
  Tape base;
  std::map<std::string, Var> leaves;
  for (const auto& [name, p] : params) leaves.emplace(name, base.leaf(p));
  Var loss = loss_fn(base, leaves, &ctx);
  base.backward(loss);
  uint64_t base_hash = base.relu_sign_hash();

  GradCheckReport rep;
  ParamSet work = params;
  for (const auto& [name, p] : params) {
    const Matrix& analytic = base.grad(leaves.at(name));
    int n = int(p.size());
    int take = std::min(samples_per_param, n);
    std::vector<int> coords = rng.sample_without_replacement(n, take);
    for (int ci : coords) {
      double saved = work.at(name).data[ci];
      work.at(name).data[ci] = saved + step;
      ctx.start_replay();
      Probe hi = eval_once(loss_fn, work, &ctx);
      work.at(name).data[ci] = saved - step;
      ctx.start_replay();
      Probe lo = eval_once(loss_fn, work, &ctx);
      work.at(name).data[ci] = saved;
      if (!std::isfinite(hi.value) || !std::isfinite(lo.value))
        throw std::runtime_error("grad_check: non-finite numeric value at '" +
                                 name + "'[" + std::to_string(ci) + "]");
      if (hi.relu_hash != base_hash || lo.relu_hash != base_hash) {
        rep.skipped_kinks += 1;
        continue;
      }
      double numeric = (hi.value - lo.value) / (2.0 * step);
      double a = analytic.data[ci];
      double err = std::fabs(a - numeric) /
                   std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      rep.max_rel_err = std::max(rep.max_rel_err, err);
      rep.checked += 1;
    }
  }
  return rep;
}

}  // namespace mgwb
