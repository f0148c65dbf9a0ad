#include "dmb/analysis.hpp"

#include <cmath>

#include "dmb/errors.hpp"

namespace dmb {

namespace {

// F0 + D^2 L + 2 D sigma sqrt(m), with F0 defaulting to D^2 L (the
// simplified bound).
double psi_base(double sigma2, double m, const BoundParams& p) {
  const double d2l = p.diameter * p.diameter * p.smoothness;
  const double f0 = p.initial_gap.value_or(d2l);
  return f0 + d2l + 2.0 * p.diameter * std::sqrt(sigma2) * std::sqrt(m);
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) throw InputError(std::string(what) + " must be positive");
}

}  // namespace

double psi_serial(const BoundParams& p) {
  check_positive(p.m, "m");
  return psi_base(p.sigma2, p.m, p);
}

double psi_minibatch(const BoundParams& p) {
  check_positive(p.m, "m");
  check_positive(p.batch, "b");
  return 2.0 * p.batch * p.diameter * p.diameter * p.smoothness +
         2.0 * p.diameter * std::sqrt(p.sigma2) * std::sqrt(p.m + p.batch);
}

double psi_minibatch_general(const BoundParams& p) {
  check_positive(p.m, "m");
  check_positive(p.batch, "b");
  return p.batch *
         psi_base(p.sigma2 / p.batch, std::ceil(p.m / p.batch), p);
}

double psi_dmb(const BoundParams& p) {
  check_positive(p.m, "m");
  check_positive(p.batch, "b");
  if (p.mu < 0.0) throw InputError("mu must be nonnegative");
  const double cycle = p.batch + p.mu;
  return cycle * psi_base(p.sigma2 / p.batch, std::ceil(p.m / cycle), p);
}

double psi_dmb_sqrt_expanded(const BoundParams& p) {
  check_positive(p.m, "m");
  check_positive(p.batch, "b");
  const double cycle = p.batch + p.mu;
  const double inside =
      p.m + p.mu * p.m / p.batch + cycle * cycle / p.batch;
  return 2.0 * cycle * p.diameter * p.diameter * p.smoothness +
         2.0 * p.diameter * std::sqrt(p.sigma2) * std::sqrt(inside);
}

double psi_dmb_cuberoot_expansion(const BoundParams& p) {
  check_positive(p.m, "m");
  const double D = p.diameter;
  const double L = p.smoothness;
  const double sigma = std::sqrt(p.sigma2);
  const double m = p.m;
  return 2.0 * D * sigma * std::sqrt(m) +
         2.0 * D * std::cbrt(m) * (L * D + sigma * std::sqrt(p.mu)) +
         2.0 * D * sigma * std::pow(m, 1.0 / 6.0) +
         2.0 * D * sigma * p.mu * std::pow(m, -1.0 / 6.0) +
         2.0 * p.mu * D * D * L;
}

double psi_nocomm(const BoundParams& p) {
  check_positive(p.m, "m");
  check_positive(p.nodes, "k");
  const double k = p.nodes;
  return 2.0 * k * p.diameter * p.diameter * p.smoothness +
         2.0 * p.diameter * std::sqrt(p.sigma2) * k * std::sqrt(std::ceil(p.m / k));
}

long select_batch_size(double m, double rho, long multiple_of) {
  check_positive(m, "m");
  if (!(rho > 0.0) || !(rho < 0.5)) {
    throw InputError("rho must lie in (0, 1/2)");
  }
  if (multiple_of < 1) throw InputError("multiple_of must be >= 1");
  const double raw = std::pow(m, rho);
  long b = std::lround(raw);
  if (b < 1) b = 1;
  if (multiple_of > 1) {
    b = ((b + multiple_of - 1) / multiple_of) * multiple_of;
  }
  return b;
}

std::vector<long> doubling_batch_sizes(double m, double rho) {
  check_positive(m, "m");
  std::vector<long> out;
  for (double horizon = 1.0; ; horizon *= 2.0) {
    out.push_back(select_batch_size(horizon, rho));
    if (horizon >= m) break;
  }
  return out;
}

double gap_bound(const BoundParams& p) {
  check_positive(p.m, "m");
  check_positive(p.batch, "b");
  return 2.0 * p.batch * p.diameter * p.diameter * p.smoothness / p.m +
         2.0 * p.diameter * std::sqrt(p.sigma2) / std::sqrt(p.m);
}

double gap_bound_accelerated(const BoundParams& p) {
  check_positive(p.m, "m");
  check_positive(p.batch, "b");
  return 4.0 * p.batch * p.batch * p.diameter * p.diameter * p.smoothness /
             (p.m * p.m) +
         4.0 * p.diameter * std::sqrt(p.sigma2) / std::sqrt(p.m);
}

double speedup_samples(double k, double delta, double b) {
  check_positive(k, "k");
  check_positive(b, "b");
  if (delta < 0.0) throw InputError("delta must be nonnegative");
  return k / (1.0 + delta / b * k);
}

double serial_sample_complexity(double eps, const BoundParams& p) {
  check_positive(eps, "eps");
  const double D = p.diameter;
  if (p.sigma2 == 0.0) {
    // Degenerate noiseless limit of the same equation.
    return 2.0 * D * D * p.smoothness / eps;
  }
  const double root = std::sqrt(1.0 + 2.0 * p.smoothness * eps / p.sigma2);
  const double factor = 1.0 + root;
  return D * D * p.sigma2 / (eps * eps) * factor * factor;
}

double dmb_sample_complexity(double eps, const BoundParams& p) {
  check_positive(eps, "eps");
  check_positive(p.sigma2, "sigma2");
  if (!(p.rho > 0.0) || !(p.rho < 0.5)) {
    throw InputError("rho must lie in (0, 1/2)");
  }
  check_positive(p.theta, "theta");
  const double D = p.diameter;
  const double sigma = std::sqrt(p.sigma2);
  const auto lhs = [&](double m) {
    return 2.0 * D * sigma / std::sqrt(m) *
           (1.0 + p.theta / std::pow(m, 0.5 - p.rho));
  };

  // lhs is strictly decreasing; bracket the root, widening geometrically.
  double lo = 1.0;
  double hi = 1e18;
  for (int i = 0; i < 64 && lhs(lo) < eps; ++i) lo /= 16.0;
  for (int i = 0; i < 64 && lhs(hi) > eps; ++i) hi *= 16.0;
  if (lhs(lo) < eps || lhs(hi) > eps) {
    throw SolverError("dmb_sample_complexity: failed to bracket the root");
  }
  while ((hi - lo) / hi > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (lhs(mid) > eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double speedup_gap(double eps, const BoundParams& p) {
  check_positive(p.nodes, "k");
  check_positive(p.smoothness, "L");
  const double m_srl = serial_sample_complexity(eps, p);
  const double m_dmb = dmb_sample_complexity(eps, p);
  const double b = p.theta * std::sqrt(p.sigma2) /
                   (p.diameter * p.smoothness) * std::pow(m_dmb, p.rho);
  return m_srl / (m_dmb / b * (b / p.nodes + p.delta));
}

}  // namespace dmb
