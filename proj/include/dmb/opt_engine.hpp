#pragma once

#include <optional>

#include "dmb/dmb_engine.hpp"

namespace dmb {

// Output of a stochastic-optimization run: the average of the predictors used
// across the r = floor(m / b) update cycles, plus bookkeeping.
struct OptRun {
  Vector average;   // (1/r) sum of w_1..w_r
  long batches = 0;   // r
  long samples = 0;   // r * b consumed; leftovers are discarded
  UpdateState state;  // state after the last update (w_{r+1})
  std::vector<Vector> iterates;  // w_1..w_r when traced
  std::optional<double> gap;     // F(average) - F(w*) when closed-form
  long reductions = 0;
  long messages = 0;
};

struct OptOptions {
  bool trace_iterates = false;
  int root = 0;
};

// DMB for stochastic optimization: r = floor(m/b) cycles of b samples
// (b/k per node), tree-reduced average gradients, identical updates, no
// prediction duty during reductions. Returns the iterate average.
OptRun run_dmb_opt(const RuleConfig& rule, const Schedule& schedule,
                   const Problem& problem, long m, const Topology& topology,
                   long b, Rng rng, const OptOptions& options = {});

// G = F(w_avg) - F(w*); needs the closed-form expected loss.
double optimality_gap(const Problem& problem, const Vector& w_avg);

struct GapRegretPair {
  double gap = 0.0;               // G(m) of the run's iterate average
  double regret_per_input = 0.0;  // R(m) / m
};

// Reads both sides of the E[G(m)] <= E[R(m)]/m comparison off a prediction
// run that tracked its iterate average.
GapRegretPair gap_vs_regret_check(const RunResult& run, const Problem& problem);

}  // namespace dmb
