#pragma once

#include <optional>

#include "dmb/engines.hpp"
#include "dmb/topology.hpp"
#include "dmb/vector_sum.hpp"

namespace dmb {

// Who applies the update after a reduction. Both produce identical
// trajectories for deterministic rules; every_node replays the update on each
// node's state, root_broadcast applies it once at the root and copies.
enum class UpdateApplication { every_node, root_broadcast };

struct DmbOptions {
  EngineOptions base;
  UpdateApplication application = UpdateApplication::every_node;
  // Keep one UpdateState per node and check exact synchrony every cycle.
  // Off by default: the nodes are mathematically identical.
  bool replicate_node_states = false;
  int root = 0;
};

struct NodeStats {
  long inputs = 0;
  long gradient_inputs = 0;
  long latency_inputs = 0;
  long trailing_inputs = 0;
};

struct DmbResult {
  RunResult run;
  long mu = 0;               // effective latency gap
  long cycles = 0;           // completed update cycles
  long gradient_inputs = 0;  // cycles * b
  long latency_inputs = 0;   // cycles * mu
  long trailing_inputs = 0;  // final partial cycle
  long reductions = 0;
  long messages = 0;
  std::vector<NodeStats> node_stats;
  bool nodes_synchronized = true;  // meaningful when replicate_node_states
};

// Distributed mini-batch over the simulated network. Each cycle: b inputs
// (b/k per node) are predicted with the shared w_j and their gradients
// accumulated per node; a tree reduction sums them while mu further inputs
// are predicted with gradients discarded; every node then applies the same
// averaged-gradient update. The logical clock is the global input count.
// mu defaults to compute_mu on the topology's latency and rate.
DmbResult run_dmb(const RuleConfig& rule, const Schedule& schedule,
                  const Problem& problem, long m, const Topology& topology,
                  long b, Rng rng, std::optional<long> mu_override = {},
                  const DmbOptions& options = {});

struct NoCommResult {
  RunResult run;
  std::vector<UpdateState> node_states;
};

// k isolated learners on round-robin substreams; regret is summed across
// nodes. per_node_b > 1 runs the serial mini-batch algorithm on each node.
NoCommResult run_no_comm(const RuleConfig& rule, const Schedule& schedule,
                         const Problem& problem, long m, int k,
                         long per_node_b, Rng rng,
                         const EngineOptions& options = {});

struct InterlacedResult {
  RunResult run;
  long mu = 0;
  int instances = 0;  // c = 1 + mu / b
  std::vector<UpdateState> instance_states;
  long reductions = 0;
  long messages = 0;
  // max over inputs of f(mean predictor) - mean of instance losses; convexity
  // keeps it <= 0 up to rounding. Only tracked when requested.
  double max_jensen_gap = 0.0;
  bool jensen_tracked = false;
};

struct InterlacedOptions {
  EngineOptions base;
  bool track_jensen_gap = false;
  int root = 0;
};

// c = 1 + mu/b staggered DMB instances; exactly one collects gradients at a
// time while the others' reductions complete in the background. Every
// prediction served is the coordinatewise mean of the c current predictors.
// Requires b to divide mu.
InterlacedResult run_interlaced(const RuleConfig& rule,
                                const Schedule& schedule,
                                const Problem& problem, long m,
                                const Topology& topology, long b, Rng rng,
                                std::optional<long> mu_override = {},
                                const InterlacedOptions& options = {});

}  // namespace dmb
