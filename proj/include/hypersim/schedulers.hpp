// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Trial schedulers. All of them are invoked only at step-completion decision
// points and communicate through SchedulerDecision; state transitions and
// atom movements stay in the engine.

#pragma once

#include "hypersim/allocator.hpp"
#include "hypersim/core.hpp"
#include "hypersim/profiler.hpp"
#include "hypersim/rung.hpp"
#include "hypersim/trace.hpp"

#include <memory>

namespace hypersim {

struct ScheduleContext {
  double now = 0.0;
  double step_duration = 0.0; // duration of the step that just completed
  const ExperimentConfig& cfg;
  ClusterState& cluster;
  RungLadder& rungs;
  const std::vector<Trial*>& live; // Running + PendingStart, insertion order
  EventTrace& trace;
};

struct EntranceEval {
  bool admit = false;
  bool deadline_inputs = false; // t_a / t_f below are meaningful
  double t_a = 0.0;
  double t_f = 0.0;
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;

  // Consulted by the engine only while at least one atom is free.
  virtual EntranceEval entrance_policy(double now,
                                       const std::vector<Trial*>& live) = 0;

  virtual SchedulerDecision schedule(Trial& t, ScheduleContext& ctx) = 0;

  // Observed startup/resize overhead, reported when a trial finishes starting.
  virtual void on_startup_complete(Trial&, double) {}

  virtual const ProfilerState* profiler() const { return nullptr; }
};

std::unique_ptr<Scheduler> make_scheduler(const ExperimentConfig& cfg);

// Whether the rung ladder should use the lifted survivor count (speculative
// evaluation keeps first arrivals running).
bool lifted_cutoffs(const ExperimentConfig& cfg);

struct PromoteOrLaunchAction {
  enum class Kind { Resume, Launch, None };
  Kind kind = Kind::None;
  int trial = -1; // Resume only
};

// Promotion first (highest rung, best record, rank within top floor(n/eta));
// a fresh launch only if nothing is promotable and the entrance admits one.
PromoteOrLaunchAction promote_or_launch(const RungLadder& rungs,
                                        bool entrance_ok);

} // namespace hypersim
