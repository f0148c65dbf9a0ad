#pragma once

#include <cmath>

#include "dmb/errors.hpp"

namespace dmb {

// Step-size parameter sequence alpha_j fed to the update rules. Two
// variants:
//   sqrt_growth: alpha_j = L + (gamma / sqrt(batch)) * sqrt(j)
//   constant:    alpha_j = L + beta
// The appendix-style (L + beta_j) view and the main-text alpha_j view are the
// same object here: beta_at(j) = alpha(j) - L. Binding a batch size rescales
// gamma by 1/sqrt(b) to reflect the averaged gradients' reduced variance.
struct Schedule {
  enum class Kind { sqrt_growth, constant };

  Kind kind = Kind::sqrt_growth;
  double smoothness = 0.0;  // L
  double gamma = 0.0;       // sqrt_growth coefficient before batch scaling
  double beta = 0.0;        // constant offset
  double batch = 1.0;       // bound batch size

  // gamma = sigma / D, the variance-matched choice.
  static Schedule sqrt_growth_for(double smoothness, double sigma, double D) {
    if (!(D > 0.0)) throw InputError("schedule: D must be positive");
    if (sigma < 0.0) throw InputError("schedule: sigma must be nonnegative");
    return with_gamma(smoothness, sigma / D);
  }

  static Schedule with_gamma(double smoothness, double gamma) {
    if (smoothness < 0.0) throw InputError("schedule: L must be nonnegative");
    if (gamma < 0.0) throw InputError("schedule: gamma must be nonnegative");
    Schedule s;
    s.kind = Kind::sqrt_growth;
    s.smoothness = smoothness;
    s.gamma = gamma;
    return s;
  }

  static Schedule constant_offset(double smoothness, double beta) {
    if (smoothness < 0.0) throw InputError("schedule: L must be nonnegative");
    if (beta < 0.0) throw InputError("schedule: beta must be nonnegative");
    Schedule s;
    s.kind = Kind::constant;
    s.smoothness = smoothness;
    s.beta = beta;
    return s;
  }

  // Horizon-aware constant offset beta = sigma * sqrt(m) / sqrt(2 h_star),
  // where h_star is the generator value at the comparator.
  static Schedule constant_for_horizon(double smoothness, double sigma,
                                       double h_star, double m) {
    if (!(h_star > 0.0)) throw InputError("schedule: h_star must be positive");
    if (!(m >= 1.0)) throw InputError("schedule: horizon must be >= 1");
    return constant_offset(smoothness,
                           sigma * std::sqrt(m) / std::sqrt(2.0 * h_star));
  }

  Schedule bound_to_batch(double b) const {
    if (!(b >= 1.0)) throw InputError("schedule: batch must be >= 1");
    Schedule s = *this;
    s.batch = b;
    return s;
  }

  double alpha(long j) const {
    if (j < 1) throw ScheduleError("schedule index must be >= 1");
    switch (kind) {
      case Kind::sqrt_growth:
        return smoothness +
               gamma / std::sqrt(batch) * std::sqrt(static_cast<double>(j));
      case Kind::constant:
        return smoothness + beta;
    }
    return 0.0;
  }

  double beta_at(long j) const { return alpha(j) - smoothness; }
};

inline double schedule_alpha(const Schedule& s, long j) { return s.alpha(j); }

}  // namespace dmb
