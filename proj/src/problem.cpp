#include "dmb/problem.hpp"

#include <cmath>
#include <numbers>

#include "dmb/engines.hpp"
#include "dmb/errors.hpp"

namespace dmb {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// 1 / (1 + exp(a)) without overflow for either sign of a.
double neg_sigmoid(double a) {
  if (a >= 0.0) {
    const double e = std::exp(-a);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(a));
}

double logistic_loss_inner(double a) {
  // log2(1 + exp(-a)) via log1p on the non-overflowing branch.
  if (a >= 0.0) return std::log1p(std::exp(-a)) / kLn2;
  return (std::log1p(std::exp(a)) - a) / kLn2;
}

}  // namespace

double logistic_loss(const Vector& w, const Vector& z) {
  return logistic_loss_inner(dot(w, z));
}

Vector logistic_grad(const Vector& w, const Vector& z) {
  const double factor = -neg_sigmoid(dot(w, z)) / kLn2;
  return scaled(z, factor);
}

double quadratic_loss(const Vector& w, const Vector& z) {
  return 0.5 * dist_sq(w, z);
}

Vector quadratic_grad(const Vector& w, const Vector& z) {
  return sub(w, z);
}

void Problem::sample_into(Rng& rng, Vector& z) const {
  switch (loss) {
    case LossFamily::quadratic: {
      const Vector& c = *minimizer;
      z.resize(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) {
        z[i] = c[i] + noise_sd * rng.next_gaussian();
      }
      return;
    }
    case LossFamily::logistic: {
      const auto n = static_cast<std::size_t>(dim);
      const auto s = static_cast<std::size_t>(sparsity);
      double score = 0.0;
      if (2 * s <= n) {
        z.assign(n, 0.0);
        for (std::size_t picked = 0; picked < s;) {
          const auto idx = static_cast<std::size_t>(rng.next_below(n));
          if (z[idx] != 0.0) continue;
          z[idx] = 1.0;
          score += truth[idx];
          ++picked;
        }
      } else {
        z.assign(n, 1.0);
        score = truth_sum;
        for (std::size_t dropped = 0; dropped < n - s;) {
          const auto idx = static_cast<std::size_t>(rng.next_below(n));
          if (z[idx] == 0.0) continue;
          z[idx] = 0.0;
          score -= truth[idx];
          ++dropped;
        }
      }
      const double p = 1.0 - neg_sigmoid(score);
      bool positive = rng.next_bernoulli(p);
      if (label_noise > 0.0 && rng.next_bernoulli(label_noise)) {
        positive = !positive;
      }
      if (!positive) scale(z, -1.0);
      return;
    }
  }
}

Vector Problem::sample(Rng& rng) const {
  Vector z;
  sample_into(rng, z);
  return z;
}

double Problem::loss_at(const Vector& w, const Vector& z) const {
  switch (loss) {
    case LossFamily::quadratic:
      return quadratic_loss(w, z);
    case LossFamily::logistic:
      return logistic_loss_inner(dot(w, z));
  }
  return 0.0;
}

void Problem::grad_into(const Vector& w, const Vector& z, Vector& g) const {
  switch (loss) {
    case LossFamily::quadratic:
      g.resize(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) g[i] = w[i] - z[i];
      return;
    case LossFamily::logistic: {
      const double factor = -neg_sigmoid(dot(w, z)) / kLn2;
      g.resize(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) g[i] = factor * z[i];
      return;
    }
  }
}

Vector Problem::grad(const Vector& w, const Vector& z) const {
  Vector g;
  grad_into(w, z, g);
  return g;
}

double Problem::expected_loss(const Vector& w) const {
  if (!has_closed_form) {
    throw UnsupportedError("problem has no closed-form expected loss");
  }
  return 0.5 * dist_sq(w, *minimizer) +
         0.5 * static_cast<double>(dim) * noise_sd * noise_sd;
}

Vector Problem::expected_grad(const Vector& w) const {
  if (!has_closed_form) {
    throw UnsupportedError("problem has no closed-form expected gradient");
  }
  return sub(w, *minimizer);
}

const Vector& Problem::known_minimizer() const {
  if (!minimizer) throw UnsupportedError("problem has no known minimizer");
  return *minimizer;
}

Problem quadratic_problem(Vector center, double noise_sd, double diameter) {
  if (noise_sd < 0.0) throw InputError("noise_sd must be nonnegative");
  if (!(diameter > 0.0)) throw InputError("diameter must be positive");
  require_finite(center, "quadratic center");
  Problem p;
  p.loss = LossFamily::quadratic;
  p.dim = static_cast<int>(center.size());
  p.smoothness = 1.0;
  p.grad_variance = static_cast<double>(p.dim) * noise_sd * noise_sd;
  p.diameter = diameter;
  p.noise_sd = noise_sd;
  p.minimizer = std::move(center);
  p.has_closed_form = true;
  return p;
}

Problem logistic_stream(Rng& rng, int n, int sparsity, double truth_density,
                        double label_noise) {
  if (n < 1) throw InputError("dimension must be positive");
  if (sparsity < 1 || sparsity > n) {
    throw InputError("sparsity must lie in [1, n]");
  }
  if (truth_density < 0.0 || truth_density > 1.0) {
    throw InputError("truth_density must lie in [0, 1]");
  }
  if (label_noise < 0.0 || label_noise > 1.0) {
    throw InputError("label_noise must lie in [0, 1]");
  }

  Problem p;
  p.loss = LossFamily::logistic;
  p.dim = n;
  p.sparsity = sparsity;
  p.label_noise = label_noise;

  // Ground truth: a fixed number of nonzero coordinates, Gaussian weights.
  p.truth.assign(n, 0.0);
  const auto nnz = static_cast<std::size_t>(
      std::lround(truth_density * static_cast<double>(n)));
  Rng truth_rng = rng.split(0x7472757468ull);
  for (std::size_t placed = 0; placed < nnz;) {
    const auto idx = static_cast<std::size_t>(truth_rng.next_below(n));
    if (p.truth[idx] != 0.0) continue;
    p.truth[idx] = truth_rng.next_gaussian();
    ++placed;
  }
  p.truth_sum = 0.0;
  for (double v : p.truth) p.truth_sum += v;

  // ||z||^2 == sparsity for every input, so the logistic Hessian bound is
  // exact: L = max ||z||^2 / (4 ln 2).
  p.smoothness = static_cast<double>(sparsity) / (4.0 * kLn2);

  // Any upper bound on the gradient variance suffices; estimate it at the
  // initial predictor and double it.
  Rng var_rng = rng.split(0x766172ull);
  const Vector origin(static_cast<std::size_t>(n), 0.0);
  const double estimate =
      empirical_avg_grad_variance(p, origin, 1, 4096, var_rng);
  p.grad_variance = 2.0 * estimate;
  return p;
}

double minimizer_gradient_residual(const Problem& problem, double step) {
  const Vector& w = problem.known_minimizer();
  double worst = 0.0;
  Vector probe = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    probe[i] = w[i] + step;
    const double up = problem.expected_loss(probe);
    probe[i] = w[i] - step;
    const double down = problem.expected_loss(probe);
    probe[i] = w[i];
    worst = std::max(worst, std::abs((up - down) / (2.0 * step)));
  }
  return worst;
}

}  // namespace dmb
