#pragma once

#include <functional>
#include <map>
#include <string>

#include "mgwb/numcore/optim.hpp"
#include "mgwb/numcore/tape.hpp"
#include "mgwb/rng.hpp"

namespace mgwb {

// A loss expressed against leaves registered for each parameter. Must be
// deterministic: any internal randomness has to be fixed before the call.
using TapedLoss =
    std::function<Var(Tape&, const std::map<std::string, Var>&, SgFreeze*)>;

struct GradCheckReport {
  double max_rel_err = 0.0;
  int checked = 0;
  int skipped_kinks = 0;
};

// Central finite differences on sampled coordinates against the tape
// gradient. Stop-gradient branches are frozen at their base values during
// the perturbed passes. Coordinates whose perturbation flips any ReLU sign
// are excluded (kink crossings have no two-sided derivative).
GradCheckReport grad_check(const TapedLoss& loss_fn, const ParamSet& params,
                           double step, int samples_per_param, Rng rng);

}  // namespace mgwb
