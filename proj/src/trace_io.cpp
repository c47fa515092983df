// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/trace.hpp"

#include <json.hpp>

#include <cmath>

namespace hypersim {

const char* to_string(TraceKind k) {
  switch (k) {
    case TraceKind::Launch: return "launch";
    case TraceKind::StartupComplete: return "startup_complete";
    case TraceKind::RungRecord: return "rung_record";
    case TraceKind::StepComplete: return "step_complete";
    case TraceKind::Resume: return "resume";
    case TraceKind::DeadlineTerminate: return "deadline_terminate";
    case TraceKind::Deadline: return "deadline";
  }
  return "?";
}

namespace {

using json = nlohmann::ordered_json;

json config_json(const ExperimentConfig& c) {
  json j;
  j["scheduler"] = to_string(c.scheduler);
  j["deadline"] = c.deadline;
  j["atoms"] = c.atoms;
  j["min_epochs"] = c.min_epochs;
  j["max_epochs"] = c.max_epochs;
  j["eta"] = c.eta;
  j["scaling"] = to_string(c.scaling);
  j["base_step_time"] = c.base_step_time;
  j["startup_delay"] = c.startup_delay;
  j["cooldown"] = c.cooldown;
  j["seed"] = c.seed;
  j["exp_scale"] = c.exp_scale;
  if (c.scheduler == SchedulerKind::HyperSched) {
    j["speculative"] = c.speculative;
    j["resize"] = c.resize;
    j["profile"] = c.profile;
    j["entrance"] = to_string(c.entrance);
  }
  if (c.scheduler == SchedulerKind::FixedFraction) {
    j["resize"] = c.resize;
    j["exploration_fraction"] = c.exploration_fraction;
  }
  return j;
}

} // namespace

std::string trace_to_jsonl(const ExperimentConfig& cfg,
                           const EventTrace& trace) {
  std::string out;
  out.reserve(trace.records.size() * 96 + 256);
  json header;
  header["schema_version"] = 1;
  header["config"] = config_json(cfg);
  out += header.dump();
  out += '\n';
  for (const TraceRecord& r : trace.records) {
    json j;
    j["seq"] = r.seq;
    j["t"] = r.time;
    j["kind"] = to_string(r.kind);
    if (r.trial >= 0) {
      j["trial"] = r.trial;
      j["iter"] = r.iter;
      j["score"] = r.score;
      j["atoms_before"] = r.atoms_before;
      j["atoms_after"] = r.atoms_after;
      j["state"] = to_string(r.state);
    }
    switch (r.kind) {
      case TraceKind::StepComplete:
        j["dur"] = r.step_duration;
        j["decision"] = to_string(r.decision);
        if (r.resize_to > 0) j["resize_to"] = r.resize_to;
        break;
      case TraceKind::RungRecord:
        j["rung"] = r.rung;
        j["rung_n"] = r.rung_n;
        break;
      case TraceKind::Launch:
        if (!std::isnan(r.ent_t_a)) {
          j["ent_t_a"] = r.ent_t_a;
          j["ent_t_f"] = r.ent_t_f;
        }
        break;
      default:
        break;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

} // namespace hypersim
