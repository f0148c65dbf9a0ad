#pragma once

#include <functional>

#include "dmb/vec.hpp"

namespace dmb {

// A 1-strongly-convex generator h (normalized so min h = 0) together with its
// gradient map. The induced divergence is
//   d(u, v) = h(u) - h(v) - <grad h(v), u - v>,
// which dominates (1/2)||u - v||^2 by strong convexity.
//
// `gradient_inverse`, when present, inverts the gradient map exactly; the
// mirror-descent rule uses it for its unconstrained algebraic step.
struct BregmanGenerator {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(const Vector&)> gradient_inverse;
  bool euclidean = false;

  // h(w) = (1/2)||w||^2
  static BregmanGenerator make_euclidean();

  // h(w) = (1/2) sum_i a_i w_i^2 with every a_i >= 1 (keeps 1-strong
  // convexity). Non-Euclidean unless all a_i == 1.
  static BregmanGenerator diagonal_quadratic(Vector diag);
};

double bregman(const BregmanGenerator& gen, const Vector& u, const Vector& v);

}  // namespace dmb
