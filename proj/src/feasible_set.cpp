#include "dmb/feasible_set.hpp"

#include <algorithm>
#include <cmath>

namespace dmb {

FeasibleSet FeasibleSet::euclidean_ball(double radius) {
  if (!(radius > 0.0)) throw InputError("ball radius must be positive");
  FeasibleSet s;
  s.kind = Kind::ball;
  s.radius = radius;
  return s;
}

FeasibleSet FeasibleSet::coordinate_box(Vector lower, Vector upper) {
  require_same_dim(lower, upper);
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) throw InputError("box: lower > upper");
  }
  FeasibleSet s;
  s.kind = Kind::box;
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  return s;
}

bool FeasibleSet::contains(const Vector& v, double tol) const {
  switch (kind) {
    case Kind::unconstrained:
      return true;
    case Kind::ball:
      return norm(v) <= radius + tol;
    case Kind::box: {
      require_same_dim(v, lower);
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < lower[i] - tol || v[i] > upper[i] + tol) return false;
      }
      return true;
    }
  }
  return false;
}

void project_into(const FeasibleSet& set, Vector& v) {
  require_finite(v, "project");
  switch (set.kind) {
    case FeasibleSet::Kind::unconstrained:
      return;
    case FeasibleSet::Kind::ball: {
      const double n = norm(v);
      if (n > set.radius) scale(v, set.radius / n);
      return;
    }
    case FeasibleSet::Kind::box: {
      require_same_dim(v, set.lower);
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::clamp(v[i], set.lower[i], set.upper[i]);
      }
      return;
    }
  }
}

Vector project(const FeasibleSet& set, const Vector& v) {
  Vector r = v;
  project_into(set, r);
  return r;
}

}  // namespace dmb
