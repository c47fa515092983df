// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Discrete-event engine: a virtual clock, a (time, sequence)-ordered event
// queue and the glue between scheduler decisions and cluster state. Runs are
// fully deterministic for a given config.

#pragma once

#include "hypersim/core.hpp"
#include "hypersim/trace.hpp"

namespace hypersim {

struct CurvePoint {
  double time = 0.0;
  double best = 0.0; // running maximum score
};

struct Metrics {
  double max_score = 0.0;
  int best_trial = -1;
  std::int64_t top_trial_iters = 0; // steps completed by the best trial
  int trial_count = 0;              // distinct trials launched
  std::vector<CurvePoint> curve;    // one point per score update
};

// Re-derives the run metrics from the trace alone.
Metrics compute_metrics(const EventTrace& trace);

struct TrialSnapshot {
  int id = -1;
  TrialState state = TrialState::PendingStart;
  std::int64_t iter = 0;
  double score = 0.0;
  int atoms = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  EventTrace trace;
  Metrics metrics;
  double final_time = 0.0;
  std::vector<TrialSnapshot> trials;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

} // namespace hypersim
