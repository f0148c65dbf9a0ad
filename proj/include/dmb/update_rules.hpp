#pragma once

#include "dmb/bregman.hpp"
#include "dmb/feasible_set.hpp"
#include "dmb/schedule.hpp"
#include "dmb/vec.hpp"

namespace dmb {

// State threaded through an update rule: the current predictor, the running
// gradient sum (dual-averaging family only), and the number of updates
// applied so far. Each *_apply call advances `step` by exactly one.
struct UpdateState {
  Vector point;
  Vector grad_sum;
  long step = 0;
};

enum class RuleKind {
  projected_gradient,
  dual_averaging,
  mirror_descent,
  composite_dual_averaging,
};

// An update rule bound to its constraint set and extras. Applying it is a
// deterministic function of (state, gradient, alpha).
struct RuleConfig {
  RuleKind kind = RuleKind::dual_averaging;
  FeasibleSet set;
  BregmanGenerator generator = BregmanGenerator::make_euclidean();
  double l1_weight = 0.0;  // composite rule only
};

// w_1 = argmin over the set of the Euclidean generator, i.e. the projection
// of the origin.
UpdateState initial_state(int dim, const FeasibleSet& set);

// w_next = project(set, w - g / alpha)
void pgd_apply(UpdateState& state, const Vector& g, double alpha,
               const FeasibleSet& set);

// Accumulates s += g, then w_next = project(set, -s / alpha).
void da_apply(UpdateState& state, const Vector& g, double alpha,
              const FeasibleSet& set);

// argmin over the set of <g, w> + (L + beta) d(w, w_current). Closed form for
// Euclidean generators; exact mirror step through the inverse gradient map
// for non-Euclidean generators on unconstrained sets.
void md_apply(UpdateState& state, const Vector& g, double beta, double L,
              const BregmanGenerator& gen, const FeasibleSet& set);

// l1-regularized dual averaging (unconstrained, Euclidean generator):
// coordinatewise w_next = -(j / alpha) * soft_threshold(mean gradient, lambda).
void composite_da_apply(UpdateState& state, const Vector& g, double alpha,
                        double lambda);

// Dispatch used by the engines: evaluates the schedule at state.step + 1 and
// applies the configured rule.
void apply_update(const RuleConfig& rule, const Schedule& schedule,
                  UpdateState& state, const Vector& g);

}  // namespace dmb
