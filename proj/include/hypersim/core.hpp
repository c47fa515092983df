// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Core domain types for the deadline-bounded hyperparameter search simulator:
// trials, their lifecycle, experiment configuration, and the rung arithmetic
// shared by every scheduler.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypersim {

enum class ScalingKind { Linear, Sqrt, None };
enum class TrialState { PendingStart, Running, Paused, Stopped, TerminatedAtDeadline };
enum class SchedulerKind { Asha, HyperSched, FixedFraction };
enum class EntranceKind { Deadline, Capacity };
enum class Verdict { Continue, Pause, Stop };

const char* to_string(ScalingKind k);
const char* to_string(TrialState s);
const char* to_string(SchedulerKind k);
const char* to_string(EntranceKind k);
const char* to_string(Verdict v);

// Allowed lifecycle edges. Stopped and TerminatedAtDeadline are terminal.
bool legal_transition(TrialState from, TrialState to);

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  SchedulerKind scheduler = SchedulerKind::HyperSched;
  double deadline = 15.0;      // T, simulated time units
  int atoms = 4;               // N, cluster size in atoms
  std::int64_t min_epochs = 1; // r, first rung milestone
  std::int64_t max_epochs = 500; // R, hard per-trial cap
  std::int64_t eta = 3;        // reduction factor
  ScalingKind scaling = ScalingKind::Linear; // true workload scaling
  double base_step_time = 0.1; // one-atom step duration
  double startup_delay = 0.0;  // charged on launch, resume and resize
  std::int64_t cooldown = 10;  // steps a trial must run between resizes
  std::uint64_t seed = 0;
  double exp_scale = 0.1;      // mean of the exponential draw for b0

  // hypersched knobs (fixed_fraction shares resize/cooldown)
  bool speculative = true;
  bool resize = true;
  bool profile = true;         // false: assume linear scaling, ignore overhead
  EntranceKind entrance = EntranceKind::Deadline;
  double exploration_fraction = 0.5; // fixed_fraction only

  void validate() const; // throws ConfigError naming the offending field
};

struct HyperparamSample {
  double b0 = 0.0; // decay speed, >= 0
  double b1 = 0.0; // offset, in [0, 1]
  double b2 = 0.0; // asymptote penalty, in [0, 1]
};

struct Trial {
  int id = -1;
  HyperparamSample sample;
  TrialState state = TrialState::PendingStart;
  std::int64_t iter = 0;       // completed steps
  int atoms = 0;               // current allocation, > 0 iff live
  double current_score = 0.0;
  double start_time = 0.0;     // first launch time
  double acc_running = 0.0;    // completed RUNNING time
  double running_since = 0.0;  // valid while RUNNING
  std::int64_t iters_since_resize = 0;
  std::map<std::int64_t, double> rung_scores;        // milestone -> recorded score
  std::map<std::int64_t, std::int64_t> rung_arrival; // milestone -> arrival index

  bool live() const {
    return state == TrialState::PendingStart || state == TrialState::Running;
  }
  // Simulated time spent RUNNING up to `now`, including the in-progress step.
  double running_time(double now) const {
    return state == TrialState::Running ? acc_running + (now - running_since)
                                        : acc_running;
  }
};

// Geometric rung ladder r, r*eta, r*eta^2, ... strictly below R.
std::vector<std::int64_t> rung_milestones(std::int64_t r, std::int64_t eta,
                                          std::int64_t R);

// Size of the survivor set at a rung with n recorded scores. The speculative
// variant lifts the count to at least one so first arrivals keep running.
std::size_t top_k_count(std::size_t n, std::int64_t eta, bool speculative);

struct SchedulerDecision {
  Verdict verdict = Verdict::Continue;
  std::optional<int> resize_to; // only meaningful with Continue
};

} // namespace hypersim
