// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Trace-replay checkers shared by the unit tests and the acceptance gate.
// Every checker works from the recorded trace alone (plus the config echo),
// re-deriving scheduler inputs independently of the engine's internal state.

#pragma once

#include "hypersim/simulator.hpp"

#include <string>
#include <vector>

namespace hypersim::testing {

// Thrown with a description of the first violated invariant.
struct CheckFailure : std::runtime_error {
  explicit CheckFailure(const std::string& what) : std::runtime_error(what) {}
};

// Replays each trial's state sequence and verifies every observed transition
// is legal and matches the record kind that caused it.
void check_state_legality(const ExperimentResult& r);

// Replays atom accounting record by record: per-trial deltas are consistent,
// total usage stays within [0, N] at every event, record times are
// non-decreasing, and the final clock is at most the deadline.
void check_conservation(const ExperimentResult& r);

// Replays rung contents from RungRecord entries and verifies every
// StepComplete decision against the rung gate: stop exactly at the step cap,
// pause exactly when some governing rung places the trial below its cutoff
// (floor or lifted survivor count per the config).
void check_rung_gates(const ExperimentResult& r);

// Recomputes the entrance-policy inputs (t_a from a replayed profiler, t_f
// from replayed running times) at every launch, checks them against the
// recorded values exactly, and verifies the admission inequality
// min(R*t_a, eta*t_f) < T - t. Requires a deadline-entrance trace.
void check_entrance_gates(const ExperimentResult& r);

// Asserts the trace contains no resize: no positive resize_to and no
// StepComplete that grows the allocation.
void check_no_resizes(const ExperimentResult& r);

// The trace serialization without its config header line, for differential
// comparisons between schedulers that should act identically.
std::string trace_body(const ExperimentResult& r);

// Runs the config twice, requires byte-identical serialized traces, applies
// the legality and conservation checks, and returns the first result.
ExperimentResult run_checked(const ExperimentConfig& cfg);

} // namespace hypersim::testing
