#include "dmb/update_rules.hpp"

#include <cmath>

#include "dmb/errors.hpp"

namespace dmb {

UpdateState initial_state(int dim, const FeasibleSet& set) {
  UpdateState s;
  s.point = project(set, Vector(static_cast<std::size_t>(dim), 0.0));
  s.grad_sum.assign(static_cast<std::size_t>(dim), 0.0);
  s.step = 0;
  return s;
}

void pgd_apply(UpdateState& state, const Vector& g, double alpha,
               const FeasibleSet& set) {
  if (!(alpha > 0.0)) throw ScheduleError("pgd: alpha must be positive");
  require_same_dim(state.point, g);
  const double step = 1.0 / alpha;
  for (std::size_t i = 0; i < state.point.size(); ++i) {
    state.point[i] -= step * g[i];
  }
  project_into(set, state.point);
  ++state.step;
}

void da_apply(UpdateState& state, const Vector& g, double alpha,
              const FeasibleSet& set) {
  if (!(alpha > 0.0)) throw ScheduleError("da: alpha must be positive");
  require_same_dim(state.grad_sum, g);
  for (std::size_t i = 0; i < g.size(); ++i) state.grad_sum[i] += g[i];
  const double inv = -1.0 / alpha;
  for (std::size_t i = 0; i < g.size(); ++i) {
    state.point[i] = inv * state.grad_sum[i];
  }
  project_into(set, state.point);
  ++state.step;
}

void md_apply(UpdateState& state, const Vector& g, double beta, double L,
              const BregmanGenerator& gen, const FeasibleSet& set) {
  if (beta < 0.0 || L < 0.0 || !(L + beta > 0.0)) {
    throw ScheduleError("md: L + beta must be positive");
  }
  require_same_dim(state.point, g);
  const double step = 1.0 / (L + beta);
  if (gen.euclidean) {
    for (std::size_t i = 0; i < state.point.size(); ++i) {
      state.point[i] -= step * g[i];
    }
    project_into(set, state.point);
    ++state.step;
    return;
  }
  if (set.kind != FeasibleSet::Kind::unconstrained) {
    throw UnsupportedError(
        "md: non-Euclidean generators are supported on unconstrained sets "
        "only");
  }
  if (!gen.gradient_inverse) {
    throw UnsupportedError("md: generator lacks an inverse gradient map");
  }
  // Mirror step: grad h(w+) = grad h(w) - g / (L + beta).
  Vector dual = gen.gradient(state.point);
  for (std::size_t i = 0; i < dual.size(); ++i) dual[i] -= step * g[i];
  state.point = gen.gradient_inverse(dual);
  ++state.step;
}

void composite_da_apply(UpdateState& state, const Vector& g, double alpha,
                        double lambda) {
  if (lambda < 0.0) throw InputError("composite da: lambda must be >= 0");
  if (!(alpha > 0.0)) throw ScheduleError("composite da: alpha must be positive");
  require_same_dim(state.grad_sum, g);
  for (std::size_t i = 0; i < g.size(); ++i) state.grad_sum[i] += g[i];
  const auto j = static_cast<double>(state.step + 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double mean = state.grad_sum[i] / j;
    const double mag = std::abs(mean) - lambda;
    state.point[i] = mag > 0.0 ? -(j / alpha) * std::copysign(mag, mean) : 0.0;
  }
  ++state.step;
}

void apply_update(const RuleConfig& rule, const Schedule& schedule,
                  UpdateState& state, const Vector& g) {
  const double alpha = schedule.alpha(state.step + 1);
  switch (rule.kind) {
    case RuleKind::projected_gradient:
      pgd_apply(state, g, alpha, rule.set);
      return;
    case RuleKind::dual_averaging:
      da_apply(state, g, alpha, rule.set);
      return;
    case RuleKind::mirror_descent:
      md_apply(state, g, alpha - schedule.smoothness, schedule.smoothness,
               rule.generator, rule.set);
      return;
    case RuleKind::composite_dual_averaging:
      if (rule.set.kind != FeasibleSet::Kind::unconstrained) {
        throw ConfigError("composite da requires an unconstrained set");
      }
      composite_da_apply(state, g, alpha, rule.l1_weight);
      return;
  }
}

}  // namespace dmb
