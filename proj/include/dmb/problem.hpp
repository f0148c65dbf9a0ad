#pragma once

#include <optional>
#include <string>

#include "dmb/rng.hpp"
#include "dmb/vec.hpp"

namespace dmb {

enum class LossFamily { quadratic, logistic };

// A stochastic prediction problem: a loss family with its parameters, an
// i.i.d. input source, and the constants (L, sigma^2, D) the schedules and
// bound calculators consume. Instances are immutable after construction and
// safe to share across concurrent runs; all sampling state lives in the
// caller's Rng.
struct Problem {
  LossFamily loss = LossFamily::quadratic;
  int dim = 0;

  double smoothness = 0.0;     // L
  double grad_variance = 0.0;  // sigma^2 (an upper bound suffices)
  double diameter = 1.0;       // D proxy used by schedules and bounds

  std::optional<Vector> minimizer;  // w*, when known
  bool has_closed_form = false;     // F(w) available in closed form

  // quadratic: z ~ Normal(*minimizer, noise_sd^2 I)
  double noise_sd = 0.0;

  // logistic stream: z = y * x with x sparse binary
  int sparsity = 0;
  Vector truth;  // ground-truth weights behind the labels
  double truth_sum = 0.0;
  double label_noise = 0.0;

  void sample_into(Rng& rng, Vector& z) const;
  Vector sample(Rng& rng) const;

  double loss_at(const Vector& w, const Vector& z) const;
  void grad_into(const Vector& w, const Vector& z, Vector& g) const;
  Vector grad(const Vector& w, const Vector& z) const;

  // F(w) = E_z f(w, z); throws UnsupportedError without a closed form.
  double expected_loss(const Vector& w) const;
  Vector expected_grad(const Vector& w) const;

  const Vector& known_minimizer() const;
};

// f(w, z) = log2(1 + exp(-<w, z>)), evaluated through a log1p branch so large
// inner products cannot overflow.
double logistic_loss(const Vector& w, const Vector& z);
Vector logistic_grad(const Vector& w, const Vector& z);

// f(w, z) = (1/2)||w - z||^2
double quadratic_loss(const Vector& w, const Vector& z);
Vector quadratic_grad(const Vector& w, const Vector& z);

// Synthetic smooth testbed with every constant exact: L = 1,
// sigma^2 = n * noise_sd^2, minimizer = center, and
// F(w) = (1/2)||w - center||^2 + (n/2) noise_sd^2.
Problem quadratic_problem(Vector center, double noise_sd, double diameter = 1.0);

// Synthetic sparse binary-feature stream: each input picks `sparsity`
// distinct active coordinates, labels them through a sigmoid of the
// ground-truth score (flipped with probability label_noise), and emits
// z = y * x. L = sparsity / (4 ln 2) exactly; sigma^2 is an empirical
// estimate doubled as a safety margin.
Problem logistic_stream(Rng& rng, int n, int sparsity, double truth_density,
                        double label_noise);

// Central finite differences of F around w* confirm the stored minimizer;
// returns the max absolute directional derivative found.
double minimizer_gradient_residual(const Problem& problem, double step = 1e-5);

}  // namespace dmb
