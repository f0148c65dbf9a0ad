#include "dmb/dmb_engine.hpp"

#include <algorithm>

#include "dmb/errors.hpp"
#include "run_bookkeeper.hpp"

namespace dmb {

namespace {

long effective_mu(const Topology& topology, std::optional<long> mu_override,
                  const SpanningTree& tree) {
  if (mu_override) {
    if (*mu_override < 0) throw ConfigError("mu must be >= 0");
    return *mu_override;
  }
  return compute_mu(tree, topology.hop_latency_ms, topology.arrival_rate);
}

}  // namespace

DmbResult run_dmb(const RuleConfig& rule, const Schedule& schedule,
                  const Problem& problem, long m, const Topology& topology,
                  long b, Rng rng, std::optional<long> mu_override,
                  const DmbOptions& options) {
  if (m < 1) throw RunError("run_dmb: m must be >= 1");
  topology.validate();
  const int k = topology.nodes;
  if (b < 1 || b % k != 0) {
    throw ConfigError("run_dmb: b must be a positive multiple of k");
  }
  const SpanningTree tree = build_tree(topology, options.root);
  const long mu = effective_mu(topology, mu_override, tree);

  DmbResult out;
  out.mu = mu;
  out.node_stats.assign(static_cast<std::size_t>(k), NodeStats{});

  detail::Bookkeeper book(problem, options.base, m);
  UpdateState state = initial_state(problem.dim, rule.set);
  std::vector<UpdateState> replicas;
  if (options.replicate_node_states) {
    replicas.assign(static_cast<std::size_t>(k), state);
  }
  book.start(state);

  std::vector<KahanVec> accs(static_cast<std::size_t>(k),
                             KahanVec(state.point.size()));
  std::vector<Vector> per_node(static_cast<std::size_t>(k));
  Vector z, g, mean;
  long t = 0;

  while (m - t >= b + mu) {
    // Gradient phase: b inputs, round-robin by arrival index.
    for (auto& acc : accs) acc.reset(state.point.size());
    for (long s = 0; s < b; ++s, ++t) {
      const auto node = static_cast<std::size_t>(t % k);
      problem.sample_into(rng, z);
      book.observe(state.point, z);
      problem.grad_into(state.point, z, g);
      accs[node].add(g);
      ++out.node_stats[node].inputs;
      ++out.node_stats[node].gradient_inputs;
    }

    // Tree reduction of the per-node sums.
    for (std::size_t i = 0; i < per_node.size(); ++i) {
      per_node[i] = accs[i].sum();
    }
    VectorSumResult sum = vector_sum(tree, per_node);
    ++out.reductions;
    out.messages += sum.messages;

    // Latency phase: mu inputs predicted with the old w_j, gradients never
    // computed.
    for (long s = 0; s < mu; ++s, ++t) {
      const auto node = static_cast<std::size_t>(t % k);
      problem.sample_into(rng, z);
      book.observe(state.point, z);
      ++out.node_stats[node].inputs;
      ++out.node_stats[node].latency_inputs;
    }

    // Identical update on every node.
    mean = std::move(sum.total);
    scale(mean, 1.0 / static_cast<double>(b));
    if (options.replicate_node_states) {
      if (options.application == UpdateApplication::every_node) {
        for (auto& replica : replicas) {
          apply_update(rule, schedule, replica, mean);
        }
      } else {
        UpdateState& at_root = replicas[static_cast<std::size_t>(tree.root)];
        apply_update(rule, schedule, at_root, mean);
        for (auto& replica : replicas) replica = at_root;
      }
      for (const auto& replica : replicas) {
        if (replica.point != replicas.front().point) {
          out.nodes_synchronized = false;
        }
      }
      state = replicas.front();
    } else {
      apply_update(rule, schedule, state, mean);
    }
    ++out.cycles;
    out.gradient_inputs += b;
    out.latency_inputs += mu;
    book.updated(state);
  }

  // Trailing partial cycle: predicted on and counted, no update.
  for (; t < m; ++t) {
    const auto node = static_cast<std::size_t>(t % k);
    problem.sample_into(rng, z);
    book.observe(state.point, z);
    ++out.node_stats[node].inputs;
    ++out.node_stats[node].trailing_inputs;
    ++out.trailing_inputs;
  }

  out.run = book.finish(std::move(state));
  return out;
}

NoCommResult run_no_comm(const RuleConfig& rule, const Schedule& schedule,
                         const Problem& problem, long m, int k,
                         long per_node_b, Rng rng,
                         const EngineOptions& options) {
  if (m < 1) throw RunError("run_no_comm: m must be >= 1");
  if (k < 1) throw ConfigError("run_no_comm: k must be >= 1");
  if (per_node_b < 1) throw ConfigError("run_no_comm: per_node_b must be >= 1");

  detail::Bookkeeper book(problem, options, m);
  const UpdateState fresh = initial_state(problem.dim, rule.set);
  std::vector<UpdateState> states(static_cast<std::size_t>(k), fresh);
  std::vector<KahanVec> accs(static_cast<std::size_t>(k),
                             KahanVec(fresh.point.size()));
  std::vector<long> filled(static_cast<std::size_t>(k), 0);
  book.start(fresh);

  Vector z, g, mean;
  for (long t = 0; t < m; ++t) {
    const auto node = static_cast<std::size_t>(t % k);
    UpdateState& state = states[node];
    problem.sample_into(rng, z);
    book.observe(state.point, z);
    problem.grad_into(state.point, z, g);
    accs[node].add(g);
    if (++filled[node] == per_node_b) {
      accs[node].mean_into(static_cast<double>(per_node_b), mean);
      apply_update(rule, schedule, state, mean);
      book.updated(state);
      accs[node].reset(state.point.size());
      filled[node] = 0;
    }
  }

  NoCommResult out;
  out.run = book.finish(states.front());
  out.node_states = std::move(states);
  return out;
}

InterlacedResult run_interlaced(const RuleConfig& rule,
                                const Schedule& schedule,
                                const Problem& problem, long m,
                                const Topology& topology, long b, Rng rng,
                                std::optional<long> mu_override,
                                const InterlacedOptions& options) {
  if (m < 1) throw RunError("run_interlaced: m must be >= 1");
  topology.validate();
  const int k = topology.nodes;
  if (b < 1 || b % k != 0) {
    throw ConfigError("run_interlaced: b must be a positive multiple of k");
  }
  const SpanningTree tree = build_tree(topology, options.root);
  const long mu = effective_mu(topology, mu_override, tree);
  if (mu % b != 0) {
    throw ConfigError("run_interlaced: b must divide mu");
  }
  const long c = 1 + mu / b;

  InterlacedResult out;
  out.mu = mu;
  out.instances = static_cast<int>(c);
  out.jensen_tracked = options.track_jensen_gap;

  detail::Bookkeeper book(problem, options.base, m);
  const UpdateState fresh = initial_state(problem.dim, rule.set);
  std::vector<UpdateState> instances(static_cast<std::size_t>(c), fresh);
  book.start(fresh);

  // An update computed at a block's end becomes visible only when its
  // reduction completes, mu inputs later -- exactly when the owning instance
  // reawakens.
  struct Pending {
    long visible_at = -1;
    UpdateState state;
  };
  std::vector<Pending> pending(static_cast<std::size_t>(c));
  const auto install_ready = [&](long now) {
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (pending[i].visible_at >= 0 && pending[i].visible_at <= now) {
        instances[i] = std::move(pending[i].state);
        pending[i].visible_at = -1;
        book.updated(instances[i]);
      }
    }
  };

  std::vector<KahanVec> accs(static_cast<std::size_t>(k),
                             KahanVec(fresh.point.size()));
  for (auto& acc : accs) acc.reset(fresh.point.size());
  std::vector<Vector> per_node(static_cast<std::size_t>(k));

  Vector z, g, mean, averaged(fresh.point.size(), 0.0);
  std::size_t active = 0;
  const double inv_c = 1.0 / static_cast<double>(c);

  for (long t = 0; t < m; ++t) {
    install_ready(t);

    // Serve the average of the current instance predictors.
    std::fill(averaged.begin(), averaged.end(), 0.0);
    for (const auto& inst : instances) {
      for (std::size_t d = 0; d < averaged.size(); ++d) {
        averaged[d] += inst.point[d];
      }
    }
    scale(averaged, inv_c);

    problem.sample_into(rng, z);
    book.observe(averaged, z);
    if (options.track_jensen_gap) {
      double mean_loss = 0.0;
      for (const auto& inst : instances) {
        mean_loss += problem.loss_at(inst.point, z);
      }
      mean_loss *= inv_c;
      out.max_jensen_gap = std::max(
          out.max_jensen_gap, problem.loss_at(averaged, z) - mean_loss);
    }

    // The active instance learns on this input at its own predictor.
    const auto node = static_cast<std::size_t>(t % k);
    problem.grad_into(instances[active].point, z, g);
    accs[node].add(g);

    if ((t + 1) % b == 0) {
      // Block complete: launch the reduction, schedule the update for when
      // this instance wakes again, and hand off to the next instance.
      for (std::size_t i = 0; i < per_node.size(); ++i) {
        per_node[i] = accs[i].sum();
      }
      VectorSumResult sum = vector_sum(tree, per_node);
      ++out.reductions;
      out.messages += sum.messages;
      mean = std::move(sum.total);
      scale(mean, 1.0 / static_cast<double>(b));

      UpdateState next = instances[active];
      apply_update(rule, schedule, next, mean);
      pending[active] = Pending{t + 1 + mu, std::move(next)};

      active = (active + 1) % static_cast<std::size_t>(c);
      for (auto& acc : accs) acc.reset(fresh.point.size());
    }
  }
  // Reductions that completed exactly at the end of the stream still count.
  install_ready(m);

  out.run = book.finish(instances[active]);
  out.instance_states = std::move(instances);
  return out;
}

}  // namespace dmb
