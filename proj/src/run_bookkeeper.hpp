#pragma once

#include <utility>
#include <vector>

#include "dmb/engines.hpp"

namespace dmb::detail {

// Per-input accounting shared by every engine: ledger rows, optional regret
// terms, optional predictor traces, optional streaming iterate average.
class Bookkeeper {
 public:
  Bookkeeper(const Problem& problem, const EngineOptions& options, long m)
      : problem_(problem),
        options_(options),
        has_comparator_(problem.minimizer.has_value()) {
    result_.ledger = RegretLedger(has_comparator_);
    if (options.track_regret_terms) {
      result_.regret_terms.reserve(static_cast<std::size_t>(m));
    }
  }

  void start(const UpdateState& state) {
    if (options_.track_iterate_average) {
      avg_acc_.assign(state.point.size(), KahanScalar{});
    }
    if (options_.trace_predictors) result_.trace.push_back(state.point);
  }

  void observe(const Vector& w, const Vector& z) {
    const double loss = problem_.loss_at(w, z);
    double comp = 0.0;
    if (has_comparator_) comp = problem_.loss_at(*problem_.minimizer, z);
    result_.ledger.record(loss, comp);
    if (options_.track_regret_terms) {
      result_.regret_terms.push_back(loss - comp);
    }
    if (options_.track_iterate_average) {
      for (std::size_t i = 0; i < w.size(); ++i) avg_acc_[i].add(w[i]);
    }
  }

  void updated(const UpdateState& state) {
    ++result_.updates;
    if (options_.trace_predictors) result_.trace.push_back(state.point);
  }

  RunResult finish(UpdateState state) {
    result_.ledger.finalize();
    const long m = result_.ledger.inputs();
    if (options_.track_iterate_average && m > 0) {
      result_.iterate_average.resize(avg_acc_.size());
      for (std::size_t i = 0; i < avg_acc_.size(); ++i) {
        result_.iterate_average[i] =
            avg_acc_[i].value() / static_cast<double>(m);
      }
    }
    result_.state = std::move(state);
    return std::move(result_);
  }

 private:
  const Problem& problem_;
  const EngineOptions& options_;
  bool has_comparator_;
  RunResult result_;
  std::vector<KahanScalar> avg_acc_;
};

}  // namespace dmb::detail
