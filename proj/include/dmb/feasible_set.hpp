#pragma once

#include "dmb/vec.hpp"

namespace dmb {

// Closed convex constraint set for the predictor. Three variants: the whole
// space, a Euclidean ball of radius `radius` centered at the origin, and a
// coordinatewise box.
struct FeasibleSet {
  enum class Kind { unconstrained, ball, box };

  Kind kind = Kind::unconstrained;
  double radius = 0.0;
  Vector lower;
  Vector upper;

  static FeasibleSet all() { return FeasibleSet{}; }

  static FeasibleSet euclidean_ball(double radius);

  static FeasibleSet coordinate_box(Vector lower, Vector upper);

  bool contains(const Vector& v, double tol = 0.0) const;
};

// Euclidean projection onto the set. Idempotent and 1-Lipschitz.
void project_into(const FeasibleSet& set, Vector& v);
Vector project(const FeasibleSet& set, const Vector& v);

}  // namespace dmb
