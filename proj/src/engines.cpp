#include "dmb/engines.hpp"

#include <vector>

#include "dmb/errors.hpp"
#include "run_bookkeeper.hpp"

namespace dmb {

RunResult run_serial(const RuleConfig& rule, const Schedule& schedule,
                     const Problem& problem, long m, Rng rng,
                     const EngineOptions& options) {
  if (m < 1) throw RunError("run_serial: m must be >= 1");
  detail::Bookkeeper book(problem, options, m);
  UpdateState state = initial_state(problem.dim, rule.set);
  book.start(state);
  Vector z, g;
  for (long t = 0; t < m; ++t) {
    problem.sample_into(rng, z);
    book.observe(state.point, z);
    problem.grad_into(state.point, z, g);
    apply_update(rule, schedule, state, g);
    book.updated(state);
  }
  return book.finish(std::move(state));
}

RunResult run_minibatch(const RuleConfig& rule, const Schedule& schedule,
                        const Problem& problem, long m, long b, Rng rng,
                        const EngineOptions& options) {
  if (m < 1) throw RunError("run_minibatch: m must be >= 1");
  if (b < 1) throw ConfigError("run_minibatch: b must be >= 1");
  detail::Bookkeeper book(problem, options, m);
  UpdateState state = initial_state(problem.dim, rule.set);
  book.start(state);
  KahanVec acc(state.point.size());
  Vector z, g, mean;
  long t = 0;
  while (m - t >= b) {
    acc.reset(state.point.size());
    for (long s = 0; s < b; ++s, ++t) {
      problem.sample_into(rng, z);
      book.observe(state.point, z);
      problem.grad_into(state.point, z, g);
      acc.add(g);
    }
    acc.mean_into(static_cast<double>(b), mean);
    apply_update(rule, schedule, state, mean);
    book.updated(state);
  }
  // Trailing partial batch: predicted on and counted, no update.
  for (; t < m; ++t) {
    problem.sample_into(rng, z);
    book.observe(state.point, z);
  }
  return book.finish(std::move(state));
}

double empirical_avg_grad_variance(const Problem& problem, const Vector& w,
                                   long b, long samples, Rng rng) {
  if (b < 1) throw InputError("variance: b must be >= 1");
  if (samples < 1) throw InputError("variance: samples must be >= 1");

  const std::size_t dim = w.size();
  const auto batch_mean = [&](Rng stream, Vector& out) {
    KahanVec acc(dim);
    Vector z, g;
    for (long s = 0; s < b; ++s) {
      problem.sample_into(stream, z);
      problem.grad_into(w, z, g);
      acc.add(g);
    }
    acc.mean_into(static_cast<double>(b), out);
  };

  if (problem.has_closed_form) {
    const Vector reference = problem.expected_grad(w);
    // Per-sample values are stored and reduced in index order so the result
    // does not depend on the thread count.
    std::vector<double> sq(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(static)
    for (long i = 0; i < samples; ++i) {
      Vector mean;
      batch_mean(rng.split(static_cast<std::uint64_t>(i)), mean);
      sq[static_cast<std::size_t>(i)] = dist_sq(mean, reference);
    }
    double total = 0.0;
    for (double v : sq) total += v;
    return total / static_cast<double>(samples);
  }

  // No closed form: two passes over the same replayed streams, using the
  // sample mean as the grad F surrogate (with Bessel correction).
  KahanVec mean_acc(dim);
  Vector mean;
  for (long i = 0; i < samples; ++i) {
    batch_mean(rng.split(static_cast<std::uint64_t>(i)), mean);
    mean_acc.add(mean);
  }
  Vector surrogate;
  mean_acc.mean_into(static_cast<double>(samples), surrogate);

  double total = 0.0;
  for (long i = 0; i < samples; ++i) {
    batch_mean(rng.split(static_cast<std::uint64_t>(i)), mean);
    total += dist_sq(mean, surrogate);
  }
  const auto n = static_cast<double>(samples);
  return samples > 1 ? total / (n - 1.0) : total;
}

}  // namespace dmb
