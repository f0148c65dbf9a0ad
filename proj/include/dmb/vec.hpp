#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dmb/errors.hpp"

namespace dmb {

using Vector = std::vector<double>;

inline void require_same_dim(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw InputError("dimension mismatch: " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  }
}

inline double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vector& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

inline double norm(const Vector& a) { return std::sqrt(norm_sq(a)); }

inline double dist_sq(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// y += a * x
inline void axpy(double a, const Vector& x, Vector& y) {
  require_same_dim(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void scale(Vector& x, double a) {
  for (double& v : x) v *= a;
}

inline Vector scaled(const Vector& x, double a) {
  Vector y = x;
  scale(y, a);
  return y;
}

inline Vector sub(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vector add(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline bool all_finite(const Vector& a) {
  for (double x : a) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline void require_finite(const Vector& a, const char* what) {
  if (!all_finite(a)) throw InputError(std::string(what) + ": non-finite entry");
}

// Kahan-compensated coordinatewise accumulator for gradient sums. Batch
// gradients are accumulated in arrival order and divided by the batch size
// once at the end, so the same inputs always produce the same bits.
class KahanVec {
 public:
  KahanVec() = default;
  explicit KahanVec(std::size_t dim) : sum_(dim, 0.0), comp_(dim, 0.0) {}

  void reset(std::size_t dim) {
    sum_.assign(dim, 0.0);
    comp_.assign(dim, 0.0);
  }

  void add(const Vector& g) {
    for (std::size_t i = 0; i < sum_.size(); ++i) {
      const double y = g[i] - comp_[i];
      const double t = sum_[i] + y;
      comp_[i] = (t - sum_[i]) - y;
      sum_[i] = t;
    }
  }

  const Vector& sum() const { return sum_; }

  void mean_into(double count, Vector& out) const {
    out = sum_;
    scale(out, 1.0 / count);
  }

 private:
  Vector sum_;
  Vector comp_;
};

// Scalar Kahan accumulator (used for streaming iterate averages).
class KahanScalar {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace dmb
