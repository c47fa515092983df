// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "support.hpp"

#include "hypersim/profiler.hpp"
#include "hypersim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace hypersim::testing {

namespace {

std::string where(const ExperimentResult& r, const TraceRecord& rec,
                  const std::string& msg) {
  std::ostringstream out;
  out << msg << " [scheduler=" << to_string(r.config.scheduler)
      << " seed=" << r.config.seed << " N=" << r.config.atoms
      << " T=" << r.config.deadline << " seq=" << rec.seq
      << " t=" << rec.time << " kind=" << to_string(rec.kind)
      << " trial=" << rec.trial << "]";
  return out.str();
}

[[noreturn]] void fail(const ExperimentResult& r, const TraceRecord& rec,
                       const std::string& msg) {
  throw CheckFailure(where(r, rec, msg));
}

} // namespace

void check_state_legality(const ExperimentResult& r) {
  std::map<int, TrialState> state;
  for (const TraceRecord& rec : r.trace.records) {
    if (rec.kind == TraceKind::Deadline) {
      if (rec.trial != -1) fail(r, rec, "deadline record names a trial");
      continue;
    }
    if (rec.trial < 0) fail(r, rec, "record without a trial");
    auto it = state.find(rec.trial);
    if (rec.kind == TraceKind::Launch) {
      if (it != state.end()) fail(r, rec, "second launch of the same trial");
      if (rec.state != TrialState::PendingStart)
        fail(r, rec, "launch must leave the trial pending");
      state[rec.trial] = rec.state;
      continue;
    }
    if (it == state.end()) fail(r, rec, "record for an unlaunched trial");
    TrialState prev = it->second;
    if (rec.state != prev && !legal_transition(prev, rec.state))
      fail(r, rec,
           std::string("illegal transition ") + to_string(prev) + " -> " +
               to_string(rec.state));
    switch (rec.kind) {
      case TraceKind::StartupComplete:
        if (prev != TrialState::PendingStart ||
            rec.state != TrialState::Running)
          fail(r, rec, "startup must take pending -> running");
        break;
      case TraceKind::Resume:
        if (prev != TrialState::Paused ||
            rec.state != TrialState::PendingStart)
          fail(r, rec, "resume must take paused -> pending");
        break;
      case TraceKind::StepComplete:
        if (prev != TrialState::Running)
          fail(r, rec, "step completion for a non-running trial");
        if (rec.decision == Verdict::Pause &&
            rec.state != TrialState::Paused)
          fail(r, rec, "pause decision without paused state");
        if (rec.decision == Verdict::Stop &&
            rec.state != TrialState::Stopped)
          fail(r, rec, "stop decision without stopped state");
        if (rec.decision == Verdict::Continue &&
            rec.state != TrialState::Running &&
            rec.state != TrialState::PendingStart)
          fail(r, rec, "continue decision left a dead state");
        if (rec.state == TrialState::PendingStart && rec.resize_to == 0)
          fail(r, rec, "restart without a resize");
        break;
      case TraceKind::RungRecord:
        if (rec.state != prev) fail(r, rec, "rung record changed state");
        break;
      case TraceKind::DeadlineTerminate:
        if (rec.state != TrialState::TerminatedAtDeadline)
          fail(r, rec, "deadline terminate without terminal state");
        break;
      default:
        fail(r, rec, "unexpected record kind");
    }
    it->second = rec.state;
  }
}

void check_conservation(const ExperimentResult& r) {
  std::map<int, int> atoms; // per-trial allocation after the last record
  int used = 0;
  double last_time = 0.0;
  std::int64_t expect_seq = 0;
  for (const TraceRecord& rec : r.trace.records) {
    if (rec.seq != expect_seq++) fail(r, rec, "non-sequential record");
    if (rec.time < last_time) fail(r, rec, "time moved backwards");
    last_time = rec.time;
    if (rec.kind == TraceKind::Deadline) continue;
    int before = atoms.count(rec.trial) ? atoms[rec.trial] : 0;
    switch (rec.kind) {
      case TraceKind::Launch:
      case TraceKind::Resume:
        if (rec.atoms_before != 0 || rec.atoms_after < 1)
          fail(r, rec, "admission must take 0 atoms to >= 1");
        if (before != 0) fail(r, rec, "admission of an allocated trial");
        break;
      case TraceKind::StartupComplete:
      case TraceKind::RungRecord:
        if (rec.atoms_before != before || rec.atoms_after != before)
          fail(r, rec, "allocation changed outside a decision");
        break;
      case TraceKind::StepComplete:
        if (rec.atoms_before != before)
          fail(r, rec, "step ran with an unexpected allocation");
        if (rec.decision == Verdict::Continue && rec.resize_to == 0 &&
            rec.atoms_after != rec.atoms_before)
          fail(r, rec, "plain continue changed the allocation");
        if (rec.decision == Verdict::Continue && rec.resize_to > 0 &&
            rec.atoms_after != rec.resize_to)
          fail(r, rec, "resize did not land on its target");
        if (rec.decision != Verdict::Continue && rec.atoms_after != 0)
          fail(r, rec, "pause/stop kept atoms allocated");
        break;
      case TraceKind::DeadlineTerminate:
        if (rec.atoms_after != 0)
          fail(r, rec, "deadline terminate kept atoms allocated");
        break;
      default:
        break;
    }
    used += rec.atoms_after - before;
    atoms[rec.trial] = rec.atoms_after;
    if (used < 0 || used > r.config.atoms)
      fail(r, rec, "atom conservation violated: used=" + std::to_string(used));
  }
  if (r.final_time > r.config.deadline)
    throw CheckFailure("final clock " + std::to_string(r.final_time) +
                       " past the deadline");
}

void check_rung_gates(const ExperimentResult& r) {
  const ExperimentConfig& cfg = r.config;
  bool lifted = cfg.scheduler == SchedulerKind::HyperSched && cfg.speculative;
  std::vector<std::int64_t> milestones =
      rung_milestones(cfg.min_epochs, cfg.eta, cfg.max_epochs);

  struct Entry {
    double score;
    std::int64_t arrival;
    int trial;
  };
  auto better = [](const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    return a.trial < b.trial;
  };
  // Replayed rung contents, kept sorted best-first.
  std::map<std::int64_t, std::vector<Entry>> rungs;
  // milestone -> (trial -> its recorded entry)
  std::map<std::int64_t, std::map<int, Entry>> by_trial;
  std::map<int, std::vector<std::int64_t>> touched; // pending per trial

  for (const TraceRecord& rec : r.trace.records) {
    if (rec.kind == TraceKind::RungRecord) {
      if (!std::binary_search(milestones.begin(), milestones.end(), rec.rung))
        fail(r, rec, "rung record at a non-milestone");
      std::vector<Entry>& rung = rungs[rec.rung];
      Entry e{rec.score, static_cast<std::int64_t>(rung.size()), rec.trial};
      if (static_cast<std::int64_t>(rung.size()) + 1 != rec.rung_n)
        fail(r, rec, "rung size disagrees with replay");
      rung.insert(std::upper_bound(rung.begin(), rung.end(), e, better), e);
      if (!by_trial[rec.rung].emplace(rec.trial, e).second)
        fail(r, rec, "trial recorded twice at one rung");
      touched[rec.trial].push_back(rec.rung);
      continue;
    }
    if (rec.kind != TraceKind::StepComplete) continue;

    std::vector<std::int64_t> just_touched;
    std::swap(just_touched, touched[rec.trial]);

    if (rec.iter >= cfg.max_epochs) {
      if (rec.decision != Verdict::Stop)
        fail(r, rec, "step cap reached without a stop");
      if (!just_touched.empty())
        fail(r, rec, "rung records at the step cap");
      continue;
    }
    if (rec.decision == Verdict::Stop)
      fail(r, rec, "stop before the step cap");

    // The governing rungs: with speculation every passed rung is re-checked
    // at each step; otherwise only the rungs recorded at this event.
    std::vector<std::int64_t> governing;
    if (lifted) {
      for (std::int64_t m : milestones) {
        if (m > rec.iter) break;
        governing.push_back(m);
      }
    } else {
      governing = just_touched;
    }

    bool must_pause = false;
    for (std::int64_t m : governing) {
      const std::vector<Entry>& rung = rungs[m];
      auto it = by_trial[m].find(rec.trial);
      if (it == by_trial[m].end())
        fail(r, rec, "decision on a rung the trial never recorded at");
      std::size_t k = top_k_count(rung.size(), cfg.eta, lifted);
      if (k == 0) {
        must_pause = true;
        break;
      }
      double cutoff = rung[k - 1].score;
      if (it->second.score < cutoff) {
        must_pause = true;
        break;
      }
    }
    if (must_pause && rec.decision != Verdict::Pause)
      fail(r, rec, "trial below a rung cutoff was not paused");
    if (!must_pause && rec.decision == Verdict::Pause)
      fail(r, rec, "trial within every cutoff was paused");
  }
}

void check_entrance_gates(const ExperimentResult& r) {
  const ExperimentConfig& cfg = r.config;
  if (cfg.scheduler != SchedulerKind::HyperSched ||
      cfg.entrance != EntranceKind::Deadline)
    throw CheckFailure("entrance check needs a deadline-entrance trace");

  ProfilerState prof(cfg.profile ? cfg.scaling : ScalingKind::Linear,
                     cfg.base_step_time, cfg.startup_delay, cfg.profile);
  struct Replayed {
    bool live = false;
    bool running = false;
    int atoms = 0;
    double acc = 0.0;
    double since = 0.0;
  };
  std::map<int, Replayed> trials;

  auto running_time = [](const Replayed& t, double now) {
    return t.running ? t.acc + (now - t.since) : t.acc;
  };

  for (const TraceRecord& rec : r.trace.records) {
    switch (rec.kind) {
      case TraceKind::Launch: {
        int allocated = 0;
        double t_f = 0.0;
        for (const auto& [id, t] : trials) {
          if (!t.live) continue;
          allocated += t.atoms;
          t_f = std::max(t_f, running_time(t, rec.time));
        }
        double t_a = prof.t_a();
        double t_n = cfg.deadline - rec.time;
        if (allocated >= cfg.atoms)
          fail(r, rec, "launch into a full cluster");
        if (std::min(static_cast<double>(cfg.max_epochs) * t_a,
                     t_f * static_cast<double>(cfg.eta)) >= t_n)
          fail(r, rec, "launch past the entrance deadline gate");
        bool has_inputs = !std::isnan(rec.ent_t_a);
        if (rec.trial == 0) {
          if (has_inputs)
            fail(r, rec, "first launch carries entrance inputs");
        } else {
          if (!has_inputs)
            fail(r, rec, "launch without recorded entrance inputs");
          if (rec.ent_t_a != t_a || rec.ent_t_f != t_f)
            fail(r, rec, "recorded entrance inputs disagree with replay");
        }
        trials[rec.trial] = Replayed{true, false, rec.atoms_after, 0.0, 0.0};
        break;
      }
      case TraceKind::Resume: {
        Replayed& t = trials[rec.trial];
        t.live = true;
        t.running = false;
        t.atoms = rec.atoms_after;
        break;
      }
      case TraceKind::StartupComplete: {
        prof.observe_overhead(cfg.startup_delay);
        Replayed& t = trials[rec.trial];
        t.running = true;
        t.since = rec.time;
        break;
      }
      case TraceKind::StepComplete: {
        prof.observe_step(rec.step_duration, rec.atoms_before);
        Replayed& t = trials[rec.trial];
        if (rec.state != TrialState::Running) {
          t.acc += rec.time - t.since;
          t.running = false;
          t.live = rec.state == TrialState::PendingStart;
          t.atoms = rec.atoms_after;
        }
        break;
      }
      default:
        break;
    }
  }
}

void check_no_resizes(const ExperimentResult& r) {
  for (const TraceRecord& rec : r.trace.records) {
    if (rec.kind != TraceKind::StepComplete) continue;
    if (rec.resize_to != 0) fail(r, rec, "resize in a no-resize run");
    if (rec.atoms_after > rec.atoms_before)
      fail(r, rec, "allocation grew without a resize");
  }
}

std::string trace_body(const ExperimentResult& r) {
  std::string full = trace_to_jsonl(r.config, r.trace);
  std::size_t eol = full.find('\n');
  return eol == std::string::npos ? std::string() : full.substr(eol + 1);
}

ExperimentResult run_checked(const ExperimentConfig& cfg) {
  ExperimentResult first = run_experiment(cfg);
  ExperimentResult second = run_experiment(cfg);
  if (trace_to_jsonl(first.config, first.trace) !=
      trace_to_jsonl(second.config, second.trace)) {
    throw CheckFailure(
        "re-run produced a different trace [scheduler=" +
        std::string(to_string(cfg.scheduler)) +
        " seed=" + std::to_string(cfg.seed) + "]");
  }
  check_state_legality(first);
  check_conservation(first);
  return first;
}

} // namespace hypersim::testing
