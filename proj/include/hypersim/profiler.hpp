// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Online timing estimates used by deadline-aware scheduling: t_a (one-atom
// step time) and t_o (startup/resize overhead), both exact lower medians.

#pragma once

#include "hypersim/trial_model.hpp"

#include <set>

namespace hypersim {

// Exact running median; for an even count the lower median is returned,
// i.e. element (n-1)/2 of the sorted multiset.
class RunningMedian {
 public:
  void insert(double x);
  bool empty() const { return lo_.empty(); }
  std::size_t size() const { return lo_.size() + hi_.size(); }
  double median() const; // requires !empty()

 private:
  std::multiset<double> lo_; // smaller half, median at *lo_.rbegin()
  std::multiset<double> hi_; // larger half; lo_.size() == hi_.size() or +1
};

class ProfilerState {
 public:
  // `model` is the scaling the scheduler believes in; used to normalize step
  // observations to a one-atom rate. When `track_overhead` is false t_o is
  // pinned to zero (the no-profile ablation).
  ProfilerState(ScalingKind model, double step_prior, double overhead_prior,
                bool track_overhead)
      : model_(model),
        step_prior_(step_prior),
        overhead_prior_(overhead_prior),
        track_overhead_(track_overhead) {}

  void observe_step(double duration, int atoms) {
    steps_.insert(duration * scaling_factor(model_, atoms));
  }

  void observe_overhead(double duration) {
    if (track_overhead_) overheads_.insert(duration);
  }

  // Median one-atom step time; base_step_time prior before any observation.
  double t_a() const { return steps_.empty() ? step_prior_ : steps_.median(); }

  // Median observed overhead; startup_delay prior, or zero when untracked.
  double t_o() const {
    if (!track_overhead_) return 0.0;
    return overheads_.empty() ? overhead_prior_ : overheads_.median();
  }

  ScalingKind model() const { return model_; }
  std::size_t step_samples() const { return steps_.size(); }
  std::size_t overhead_samples() const { return overheads_.size(); }

 private:
  ScalingKind model_;
  double step_prior_;
  double overhead_prior_;
  bool track_overhead_;
  RunningMedian steps_;
  RunningMedian overheads_;
};

} // namespace hypersim
