#pragma once

#include "dmb/ledger.hpp"
#include "dmb/problem.hpp"
#include "dmb/rng.hpp"
#include "dmb/update_rules.hpp"

namespace dmb {

struct EngineOptions {
  bool trace_predictors = false;     // store w_j after every update
  bool track_iterate_average = false;  // per-input mean of the predictors used
  bool track_regret_terms = false;   // store f(w_t, z_t) - f(w*, z_t) per input
};

struct RunResult {
  RegretLedger ledger{false};
  UpdateState state;
  long updates = 0;
  std::vector<Vector> trace;         // when trace_predictors
  Vector iterate_average;            // when track_iterate_average
  std::vector<double> regret_terms;  // when track_regret_terms
};

// One prediction, one gradient, one update per input.
RunResult run_serial(const RuleConfig& rule, const Schedule& schedule,
                     const Problem& problem, long m, Rng rng,
                     const EngineOptions& options = {});

// Prediction held fixed across each batch of b inputs; their gradients are
// averaged into a single update. A trailing partial batch is predicted on and
// counted but does not trigger an update.
RunResult run_minibatch(const RuleConfig& rule, const Schedule& schedule,
                        const Problem& problem, long m, long b, Rng rng,
                        const EngineOptions& options = {});

// Empirical E||mean of b gradients - grad F(w)||^2 over `samples`
// mini-batches drawn at the fixed point w. Uses the closed-form grad F when
// the problem has one, otherwise a same-draw sample mean (two passes over a
// replayed stream).
double empirical_avg_grad_variance(const Problem& problem, const Vector& w,
                                   long b, long samples, Rng rng);

}  // namespace dmb
