#include "clsgen/adam.hpp"

#include <cmath>

#include "clsgen/errors.hpp"
#include "clsgen/rng.hpp"

namespace clsgen::tc {

void adam_apply(ParameterSet& ps, const std::map<std::string, Mat>& grads, const AdamConfig& cfg) {
  // Validate before mutating anything.
  double sq_norm = 0.0;
  for (const auto& name : ps.names()) {
    auto it = grads.find(name);
    if (it == grads.end()) throw ModelError("adam: missing gradient for " + name);
    if (!it->second.allFinite()) throw ModelError("adam: non-finite gradient in " + name);
    sq_norm += it->second.squaredNorm();
  }
  double scale = 1.0;
  if (cfg.grad_clip > 0.0) {
    double norm = std::sqrt(sq_norm);
    if (norm > cfg.grad_clip) scale = cfg.grad_clip / norm;
  }

  ps.set_step(ps.step() + 1);
  const double t = static_cast<double>(ps.step());
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (const auto& name : ps.names()) {
    ParameterSet::Entry& e = ps.entry(name);
    const Mat g = grads.at(name) * scale;
    e.m = cfg.beta1 * e.m + (1.0 - cfg.beta1) * g;
    e.v = cfg.beta2 * e.v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    Mat m_hat = e.m / bc1;
    Mat v_hat = e.v / bc2;
    e.value.array() -= cfg.lr * m_hat.array() / (v_hat.array().sqrt() + cfg.eps);
  }
}

std::map<std::string, Mat> collect_grads(const Tape& tape, const BoundParams& bound) {
  std::map<std::string, Mat> out;
  for (const auto& [name, var] : bound) {
    const Mat& g = tape.grad(var);
    if (g.size() == 0) {
      out.emplace(name, Mat::Zero(tape.val(var).rows(), tape.val(var).cols()));
    } else {
      out.emplace(name, g);
    }
  }
  return out;
}

double grad_check(const LossBuilder& build, ParameterSet& ps, int probe_count, uint64_t seed, double h) {
  Tape tape;
  BoundParams bound = ps.bind(tape, /*track=*/true);
  Var loss = build(tape, bound);
  if (!tape.val(loss).allFinite()) throw ModelError("grad_check: non-finite loss");
  tape.backward(loss);
  std::map<std::string, Mat> analytic = collect_grads(tape, bound);

  auto eval = [&]() {
    Tape t2;
    BoundParams b2 = ps.bind(t2, /*track=*/false);
    Var l = build(t2, b2);
    double v = t2.val(l)(0, 0);
    if (!std::isfinite(v)) throw ModelError("grad_check: non-finite loss");
    return v;
  };

  std::vector<std::string> names = ps.names();
  Rng rng(seed);
  double max_rel = 0.0;
  for (int p = 0; p < probe_count; ++p) {
    const std::string& name = names[rng.below(names.size())];
    Mat& value = ps.value(name);
    Eigen::Index idx = static_cast<Eigen::Index>(rng.below(static_cast<uint64_t>(value.size())));
    double saved = value.data()[idx];
    value.data()[idx] = saved + h;
    double lp = eval();
    value.data()[idx] = saved - h;
    double lm = eval();
    value.data()[idx] = saved;
    double numeric = (lp - lm) / (2.0 * h);
    double a = analytic.at(name).data()[idx];
    double rel = std::abs(a - numeric) / std::max(1e-6, std::abs(a) + std::abs(numeric));
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

}  // namespace clsgen::tc
