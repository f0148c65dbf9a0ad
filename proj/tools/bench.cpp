// Compares the serial and OpenMP trial runners on a representative
// distributed mini-batch workload and checks that both produce identical
// results. Usage: dmb_bench [trials] [m]

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "dmb/dmb_engine.hpp"
#include "dmb/trial_runner.hpp"

namespace {

struct TrialOutput {
  double regret = 0.0;
  double avg_loss = 0.0;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  const int trials = argc > 1 ? std::stoi(argv[1]) : 64;
  const long m = argc > 2 ? std::stol(argv[2]) : 50000;

  const dmb::Problem problem =
      dmb::quadratic_problem({1.0, 1.0}, 1.0, 1.0);
  dmb::RuleConfig rule;
  rule.kind = dmb::RuleKind::dual_averaging;
  const long b = 64;
  const dmb::Schedule schedule =
      dmb::Schedule::sqrt_growth_for(problem.smoothness,
                                     std::sqrt(problem.grad_variance),
                                     problem.diameter)
          .bound_to_batch(static_cast<double>(b));
  dmb::Topology topology = dmb::Topology::dary_tree(16, 2);
  topology.hop_latency_ms = 0.5;
  topology.arrival_rate = 4.0;

  const dmb::Rng base(2026);
  const auto trial = [&](int, dmb::Rng rng) {
    const dmb::DmbResult res =
        dmb::run_dmb(rule, schedule, problem, m, topology, b, rng, 16);
    return TrialOutput{res.run.ledger.regret(), res.run.ledger.average_loss()};
  };

  std::printf("workload: dmb k=16 b=%ld mu=16 m=%ld, %d trials\n", b, m,
              trials);
  std::printf("threads available: %d\n", dmb::hardware_threads());

  const auto t0 = std::chrono::steady_clock::now();
  const auto serial =
      dmb::run_trials(trials, base, trial, dmb::Parallelism::serial);
  const double serial_s = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const auto parallel =
      dmb::run_trials(trials, base, trial, dmb::Parallelism::openmp);
  const double parallel_s = seconds_since(t1);

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    identical = serial[i].regret == parallel[i].regret &&
                serial[i].avg_loss == parallel[i].avg_loss;
  }

  std::printf("serial reference: %.3f s\n", serial_s);
  std::printf("openmp:           %.3f s\n", parallel_s);
  std::printf("speedup:          %.2fx\n", serial_s / parallel_s);
  std::printf("results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
