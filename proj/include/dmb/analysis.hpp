#pragma once

#include <optional>
#include <vector>

namespace dmb {

// Inputs to the closed-form bound calculators. All quantities are
// real-valued; the engines' integer rounding (mu to a multiple of k, ...) is
// deliberately not applied here.
struct BoundParams {
  double sigma2 = 0.0;                     // gradient variance bound
  double m = 1.0;                          // horizon
  double diameter = 1.0;                   // D
  double smoothness = 0.0;                 // L
  std::optional<double> initial_gap;       // F(w_1) - F(w*) when known
  double batch = 1.0;                      // b
  double mu = 0.0;                         // latency gap in inputs
  double nodes = 1.0;                      // k
  double delta = 0.0;                      // reduction latency in time-units
  double rho = 1.0 / 3.0;                  // batch-growth exponent
  double theta = 1.0;                      // batch-growth coefficient
};

// Serial expected-regret bound: F0 + D^2 L + 2 D sigma sqrt(m), falling back
// to the simplified 2 D^2 L + 2 D sigma sqrt(m) when F0 is absent.
double psi_serial(const BoundParams& p);

// Serial mini-batch bound, closed form 2 b D^2 L + 2 D sigma sqrt(m + b).
double psi_minibatch(const BoundParams& p);
// The product form b * psi(sigma^2/b, ceil(m/b)).
double psi_minibatch_general(const BoundParams& p);

// Distributed mini-batch bound (b + mu) * psi(sigma^2/b, ceil(m/(b+mu))).
double psi_dmb(const BoundParams& p);
// Intermediate closed form 2(b+mu) D^2 L + 2 D sigma sqrt(m + mu m/b + (b+mu)^2/b).
double psi_dmb_sqrt_expanded(const BoundParams& p);
// Five-term expansion for the b = m^(1/3) choice.
double psi_dmb_cuberoot_expansion(const BoundParams& p);

// No-communication baseline: 2 k D^2 L + 2 D sigma k sqrt(ceil(m/k)).
double psi_nocomm(const BoundParams& p);

// round(m^rho), optionally rounded up to a multiple (at least one multiple)
// when the run is bound to a k-node topology.
long select_batch_size(double m, double rho = 1.0 / 3.0, long multiple_of = 1);

// Doubling-trick schedule: batch size per power-of-two epoch, up to horizon m.
std::vector<long> doubling_batch_sizes(double m, double rho = 1.0 / 3.0);

// Expected optimality-gap bound 2 b D^2 L / m + 2 D sigma / sqrt(m).
double gap_bound(const BoundParams& p);
// Accelerated-rate calculator 4 b^2 D^2 L / m^2 + 4 D sigma / sqrt(m).
double gap_bound_accelerated(const BoundParams& p);

// Sample-throughput speed-up S(m) = k / (1 + (delta/b) k).
double speedup_samples(double k, double delta, double b);

// Samples the serial algorithm needs to reach gap eps:
// (D^2 sigma^2 / eps^2) (1 + sqrt(1 + 2 L eps / sigma^2))^2.
double serial_sample_complexity(double eps, const BoundParams& p);

// Root m of (2 D sigma / sqrt(m)) (1 + theta / m^(1/2 - rho)) = eps, found by
// bisection to 1e-9 relative accuracy.
double dmb_sample_complexity(double eps, const BoundParams& p);

// Speed-up with respect to the expected optimality gap:
// S(eps) = m_srl / ((m_dmb / b) (b/k + delta)) with b = (theta sigma / D L) m_dmb^rho.
double speedup_gap(double eps, const BoundParams& p);

}  // namespace dmb
