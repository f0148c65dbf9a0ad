#pragma once

#include <vector>

#include "dmb/vec.hpp"

namespace dmb {

struct CurvePoint {
  long t = 0;
  double avg_loss = 0.0;
  double regret = 0.0;
  bool has_regret = false;
};

// Streaming regret accounting. Cumulative regret is accumulated as the plain
// running sum of the per-input terms f(w_t, z_t) - f(w*, z_t), so summing the
// recorded terms in order reproduces regret() bit for bit. Average-loss
// checkpoints land on {1, 2, 5} * 10^p plus the final input.
class RegretLedger {
 public:
  explicit RegretLedger(bool has_comparator = false)
      : has_comparator_(has_comparator) {}

  void record(double loss, double comparator_loss = 0.0) {
    ++count_;
    loss_sum_ += loss;
    if (has_comparator_) regret_ += loss - comparator_loss;
    if (is_checkpoint(count_)) push_point();
  }

  // Appends the final checkpoint if the last input did not land on one.
  void finalize() {
    if (count_ > 0 && (points_.empty() || points_.back().t != count_)) {
      push_point();
    }
  }

  long inputs() const { return count_; }
  bool has_comparator() const { return has_comparator_; }
  double regret() const { return regret_; }
  double average_loss() const {
    return count_ > 0 ? loss_sum_ / static_cast<double>(count_) : 0.0;
  }
  const std::vector<CurvePoint>& checkpoints() const { return points_; }

  static bool is_checkpoint(long t) {
    if (t < 1) return false;
    while (t % 10 == 0) t /= 10;
    return t == 1 || t == 2 || t == 5;
  }

 private:
  void push_point() {
    points_.push_back(
        {count_, average_loss(), regret_, has_comparator_});
  }

  bool has_comparator_;
  long count_ = 0;
  double loss_sum_ = 0.0;
  double regret_ = 0.0;
  std::vector<CurvePoint> points_;
};

}  // namespace dmb
