#include "dmb/opt_engine.hpp"

#include "dmb/errors.hpp"

namespace dmb {

OptRun run_dmb_opt(const RuleConfig& rule, const Schedule& schedule,
                   const Problem& problem, long m, const Topology& topology,
                   long b, Rng rng, const OptOptions& options) {
  if (m < 1) throw RunError("run_dmb_opt: m must be >= 1");
  topology.validate();
  const int k = topology.nodes;
  if (b < 1 || b % k != 0) {
    throw ConfigError("run_dmb_opt: b must be a positive multiple of k");
  }
  const long r = m / b;
  if (r < 1) throw RunError("run_dmb_opt: fewer samples than one batch");
  const SpanningTree tree = build_tree(topology, options.root);

  UpdateState state = initial_state(problem.dim, rule.set);
  std::vector<KahanScalar> avg(state.point.size());
  std::vector<KahanVec> accs(static_cast<std::size_t>(k),
                             KahanVec(state.point.size()));
  std::vector<Vector> per_node(static_cast<std::size_t>(k));

  OptRun out;
  if (options.trace_iterates) out.iterates.reserve(static_cast<std::size_t>(r));

  Vector z, g, mean;
  long t = 0;
  for (long j = 0; j < r; ++j) {
    for (std::size_t d = 0; d < state.point.size(); ++d) {
      avg[d].add(state.point[d]);
    }
    if (options.trace_iterates) out.iterates.push_back(state.point);

    for (auto& acc : accs) acc.reset(state.point.size());
    for (long s = 0; s < b; ++s, ++t) {
      const auto node = static_cast<std::size_t>(t % k);
      problem.sample_into(rng, z);
      problem.grad_into(state.point, z, g);
      accs[node].add(g);
    }
    for (std::size_t i = 0; i < per_node.size(); ++i) {
      per_node[i] = accs[i].sum();
    }
    VectorSumResult sum = vector_sum(tree, per_node);
    ++out.reductions;
    out.messages += sum.messages;
    mean = std::move(sum.total);
    scale(mean, 1.0 / static_cast<double>(b));
    apply_update(rule, schedule, state, mean);
  }

  out.batches = r;
  out.samples = r * b;
  out.average.resize(state.point.size());
  for (std::size_t d = 0; d < state.point.size(); ++d) {
    out.average[d] = avg[d].value() / static_cast<double>(r);
  }
  if (problem.has_closed_form && problem.minimizer) {
    out.gap = optimality_gap(problem, out.average);
  }
  out.state = std::move(state);
  return out;
}

double optimality_gap(const Problem& problem, const Vector& w_avg) {
  if (!problem.has_closed_form || !problem.minimizer) {
    throw UnsupportedError(
        "optimality_gap: needs a closed-form expected loss and a known "
        "minimizer");
  }
  return problem.expected_loss(w_avg) -
         problem.expected_loss(*problem.minimizer);
}

GapRegretPair gap_vs_regret_check(const RunResult& run,
                                  const Problem& problem) {
  if (run.iterate_average.empty()) {
    throw InputError(
        "gap_vs_regret_check: run did not track its iterate average");
  }
  const long m = run.ledger.inputs();
  if (m < 1) throw InputError("gap_vs_regret_check: empty run");
  GapRegretPair out;
  out.gap = optimality_gap(problem, run.iterate_average);
  out.regret_per_input = run.ledger.regret() / static_cast<double>(m);
  return out;
}

}  // namespace dmb
