// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/core.hpp"

namespace hypersim {

const char* to_string(ScalingKind k) {
  switch (k) {
    case ScalingKind::Linear: return "linear";
    case ScalingKind::Sqrt: return "sqrt";
    case ScalingKind::None: return "none";
  }
  return "?";
}

const char* to_string(TrialState s) {
  switch (s) {
    case TrialState::PendingStart: return "pending_start";
    case TrialState::Running: return "running";
    case TrialState::Paused: return "paused";
    case TrialState::Stopped: return "stopped";
    case TrialState::TerminatedAtDeadline: return "terminated_at_deadline";
  }
  return "?";
}

const char* to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::Asha: return "asha";
    case SchedulerKind::HyperSched: return "hypersched";
    case SchedulerKind::FixedFraction: return "fixed_fraction";
  }
  return "?";
}

const char* to_string(EntranceKind k) {
  return k == EntranceKind::Deadline ? "deadline" : "capacity";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Continue: return "continue";
    case Verdict::Pause: return "pause";
    case Verdict::Stop: return "stop";
  }
  return "?";
}

bool legal_transition(TrialState from, TrialState to) {
  switch (from) {
    case TrialState::PendingStart:
      return to == TrialState::Running;
    case TrialState::Running:
      return to == TrialState::Paused || to == TrialState::Stopped ||
             to == TrialState::PendingStart ||
             to == TrialState::TerminatedAtDeadline;
    case TrialState::Paused:
      return to == TrialState::PendingStart ||
             to == TrialState::TerminatedAtDeadline;
    case TrialState::Stopped:
    case TrialState::TerminatedAtDeadline:
      return false;
  }
  return false;
}

void ExperimentConfig::validate() const {
  if (atoms < 1) throw ConfigError("atoms must be >= 1");
  if (!(deadline > 0.0)) throw ConfigError("deadline must be > 0");
  if (min_epochs < 1) throw ConfigError("min_epochs must be >= 1");
  if (max_epochs < min_epochs)
    throw ConfigError("max_epochs must be >= min_epochs");
  if (eta < 2) throw ConfigError("eta must be >= 2");
  if (!(base_step_time > 0.0))
    throw ConfigError("base_step_time must be > 0");
  if (startup_delay < 0.0) throw ConfigError("startup_delay must be >= 0");
  if (cooldown < 0) throw ConfigError("cooldown must be >= 0");
  if (!(exp_scale > 0.0)) throw ConfigError("exp_scale must be > 0");
  if (scheduler == SchedulerKind::FixedFraction &&
      !(exploration_fraction >= 0.0 && exploration_fraction <= 1.0))
    throw ConfigError("exploration_fraction must be in [0, 1]");
}

std::vector<std::int64_t> rung_milestones(std::int64_t r, std::int64_t eta,
                                          std::int64_t R) {
  std::vector<std::int64_t> out;
  // Overflow-safe: milestones stay below R, which is bounded by config checks.
  for (std::int64_t m = r; m < R; m *= eta) out.push_back(m);
  return out;
}

std::size_t top_k_count(std::size_t n, std::int64_t eta, bool speculative) {
  std::size_t k = n / static_cast<std::size_t>(eta);
  if (speculative && k == 0) k = 1;
  return k;
}

} // namespace hypersim
