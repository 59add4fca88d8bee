#pragma once

#include <functional>
#include <map>

#include "clsgen/layers.hpp"

namespace clsgen::tc {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double grad_clip = 5.0;  // global L2 norm; <= 0 disables
};

// Standard Adam with bias correction. Throws ModelError on non-finite
// gradients without touching parameters or moments. Applies global-norm
// clipping first when configured.
void adam_apply(ParameterSet& ps, const std::map<std::string, Mat>& grads, const AdamConfig& cfg);

// Collects gradients of all bound parameters after Tape::backward.
std::map<std::string, Mat> collect_grads(const Tape& tape, const BoundParams& bound);

// Builds a scalar loss from bound parameters; used by training loops and the
// finite-difference gradient checker.
using LossBuilder = std::function<Var(Tape&, const BoundParams&)>;

// Compares reverse-mode gradients against central finite differences
// (default h = 1e-4) on probe_count random parameter coordinates. Returns the
// maximum relative error  |a - n| / max(1e-6, |a| + |n|).
double grad_check(const LossBuilder& build, ParameterSet& ps, int probe_count, uint64_t seed, double h = 1e-4);

}  // namespace clsgen::tc
