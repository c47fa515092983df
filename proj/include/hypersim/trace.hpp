// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Time-ordered record of everything a simulation did. Traces are the ground
// truth for metrics, invariant checks and determinism comparisons; the JSONL
// serialization is byte-stable for identical configs and seeds.

#pragma once

#include "hypersim/core.hpp"

#include <limits>

namespace hypersim {

enum class TraceKind {
  Launch,          // new trial admitted (atoms 0 -> 1, PendingStart)
  StartupComplete, // PendingStart -> Running
  RungRecord,      // score recorded at a rung milestone
  StepComplete,    // one step finished; carries the scheduler decision
  Resume,          // Paused -> PendingStart via promotion
  DeadlineTerminate, // per-trial shutdown at the deadline
  Deadline,        // final record
};

const char* to_string(TraceKind k);

struct TraceRecord {
  std::int64_t seq = 0;
  double time = 0.0;
  TraceKind kind = TraceKind::Launch;
  int trial = -1; // -1 on the Deadline record
  std::int64_t iter = 0;
  double score = 0.0;
  int atoms_before = 0;
  int atoms_after = 0;
  TrialState state = TrialState::PendingStart; // state after the record

  // StepComplete only
  double step_duration = std::numeric_limits<double>::quiet_NaN();
  Verdict decision = Verdict::Continue;
  int resize_to = 0; // 0 when no resize was applied

  // RungRecord only
  std::int64_t rung = -1;
  std::int64_t rung_n = 0; // records at the rung after this insert

  // Launch only: entrance-policy inputs (NaN when the policy did not run,
  // i.e. the unconditional first launch or a capacity-style entrance).
  double ent_t_a = std::numeric_limits<double>::quiet_NaN();
  double ent_t_f = std::numeric_limits<double>::quiet_NaN();
};

struct EventTrace {
  std::vector<TraceRecord> records;

  TraceRecord& append(double time, TraceKind kind) {
    TraceRecord r;
    r.seq = static_cast<std::int64_t>(records.size());
    r.time = time;
    r.kind = kind;
    records.push_back(r);
    return records.back();
  }
};

// One JSON object per line; first line is a header carrying schema_version
// and the full config echo. Field order is fixed (see README).
std::string trace_to_jsonl(const ExperimentConfig& cfg, const EventTrace& trace);

} // namespace hypersim
