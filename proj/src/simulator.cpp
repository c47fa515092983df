// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/simulator.hpp"

#include "hypersim/allocator.hpp"
#include "hypersim/rng.hpp"
#include "hypersim/schedulers.hpp"
#include "hypersim/trial_model.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <stdexcept>

namespace hypersim {

namespace {

enum class EventKind { StartupComplete, StepComplete, Deadline };

struct SimEvent {
  double time = 0.0;
  std::int64_t seq = 0; // breaks time ties in scheduling order
  EventKind kind = EventKind::Deadline;
  int trial = -1;
  double planned_duration = 0.0; // StepComplete only
};

struct LaterEvent {
  bool operator()(const SimEvent& a, const SimEvent& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

class Engine {
 public:
  explicit Engine(const ExperimentConfig& cfg)
      : cfg_(cfg),
        cluster_(cfg.atoms),
        rungs_(cfg.min_epochs, cfg.eta, cfg.max_epochs, lifted_cutoffs(cfg)),
        scheduler_(make_scheduler(cfg)),
        rng_(cfg.seed, "hyperparams") {}

  ExperimentResult run() {
    push(cfg_.deadline, EventKind::Deadline, -1, 0.0);
    launch_trial(nullptr); // the first trial is admitted unconditionally
    fill_free_capacity();
    check_invariants();
    while (true) {
      SimEvent ev = pop();
      clock_ = ev.time;
      if (ev.kind == EventKind::Deadline) {
        finalize_at_deadline();
        break;
      }
      if (ev.kind == EventKind::StartupComplete) {
        on_startup_complete(trials_[static_cast<std::size_t>(ev.trial)]);
      } else {
        on_step_complete(trials_[static_cast<std::size_t>(ev.trial)],
                         ev.planned_duration);
      }
      fill_free_capacity();
      check_invariants();
    }
    ExperimentResult result;
    result.config = cfg_;
    result.final_time = clock_;
    result.metrics = compute_metrics(trace_);
    for (const Trial& t : trials_) {
      result.trials.push_back(
          TrialSnapshot{t.id, t.state, t.iter, t.current_score, t.atoms});
    }
    result.trace = std::move(trace_);
    return result;
  }

 private:
  void push(double time, EventKind kind, int trial, double planned) {
    queue_.push(SimEvent{time, next_seq_++, kind, trial, planned});
  }

  SimEvent pop() {
    if (queue_.empty()) throw std::logic_error("event queue exhausted");
    SimEvent ev = queue_.top();
    queue_.pop();
    return ev;
  }

  void transition(Trial& t, TrialState to) {
    if (!legal_transition(t.state, to))
      throw std::logic_error("illegal trial state transition");
    t.state = to;
  }

  void launch_trial(const EntranceEval* eval) {
    Trial t;
    t.id = static_cast<int>(trials_.size());
    t.sample = sample_hyperparams(rng_, cfg_.exp_scale);
    t.current_score = score(t.sample, 0);
    t.start_time = clock_;
    trials_.push_back(t);
    Trial& ref = trials_.back();
    cluster_.acquire(ref, 1);
    live_.push_back(&ref);
    push(clock_ + cfg_.startup_delay, EventKind::StartupComplete, ref.id, 0.0);
    TraceRecord& rec = trace_.append(clock_, TraceKind::Launch);
    rec.trial = ref.id;
    rec.score = ref.current_score;
    rec.atoms_before = 0;
    rec.atoms_after = ref.atoms;
    rec.state = ref.state;
    if (eval && eval->deadline_inputs) {
      rec.ent_t_a = eval->t_a;
      rec.ent_t_f = eval->t_f;
    }
  }

  void resume_trial(Trial& t) {
    rungs_.unmark_paused(t);
    transition(t, TrialState::PendingStart);
    cluster_.acquire(t, 1);
    t.iters_since_resize = 0;
    live_.push_back(&t);
    push(clock_ + cfg_.startup_delay, EventKind::StartupComplete, t.id, 0.0);
    TraceRecord& rec = trace_.append(clock_, TraceKind::Resume);
    rec.trial = t.id;
    rec.iter = t.iter;
    rec.score = t.current_score;
    rec.atoms_before = 0;
    rec.atoms_after = t.atoms;
    rec.state = t.state;
  }

  void on_startup_complete(Trial& t) {
    transition(t, TrialState::Running);
    t.running_since = clock_;
    scheduler_->on_startup_complete(t, cfg_.startup_delay);
    TraceRecord& rec = trace_.append(clock_, TraceKind::StartupComplete);
    rec.trial = t.id;
    rec.iter = t.iter;
    rec.score = t.current_score;
    rec.atoms_before = rec.atoms_after = t.atoms;
    rec.state = t.state;
    double dur = step_duration(cfg_.scaling, t.atoms, cfg_.base_step_time);
    push(clock_ + dur, EventKind::StepComplete, t.id, dur);
  }

  void on_step_complete(Trial& t, double dur) {
    if (t.state != TrialState::Running)
      throw std::logic_error("step completion for a non-running trial");
    t.iter += 1;
    t.iters_since_resize += 1;
    t.current_score = score(t.sample, t.iter);
    ScheduleContext ctx{clock_, dur, cfg_, cluster_, rungs_, live_, trace_};
    SchedulerDecision decision = scheduler_->schedule(t, ctx);

    int atoms_before = t.atoms;
    switch (decision.verdict) {
      case Verdict::Stop:
        t.acc_running += clock_ - t.running_since;
        transition(t, TrialState::Stopped);
        cluster_.release(t);
        drop_live(t);
        break;
      case Verdict::Pause:
        t.acc_running += clock_ - t.running_since;
        transition(t, TrialState::Paused);
        cluster_.release(t);
        drop_live(t);
        rungs_.mark_paused(t);
        break;
      case Verdict::Continue:
        if (decision.resize_to) {
          ResizePlan plan = apply_resize(t, *decision.resize_to, cluster_,
                                         clock_, cfg_.startup_delay);
          if (!plan.applied)
            throw std::logic_error("scheduler proposed an infeasible resize");
          push(plan.restart_at, EventKind::StartupComplete, t.id, 0.0);
        } else {
          double next =
              step_duration(cfg_.scaling, t.atoms, cfg_.base_step_time);
          push(clock_ + next, EventKind::StepComplete, t.id, next);
        }
        break;
    }

    TraceRecord& rec = trace_.append(clock_, TraceKind::StepComplete);
    rec.trial = t.id;
    rec.iter = t.iter;
    rec.score = t.current_score;
    rec.atoms_before = atoms_before;
    rec.atoms_after = t.atoms;
    rec.state = t.state;
    rec.step_duration = dur;
    rec.decision = decision.verdict;
    rec.resize_to = decision.resize_to.value_or(0);
  }

  void finalize_at_deadline() {
    for (Trial& t : trials_) {
      int atoms_before = t.atoms;
      if (t.state == TrialState::Running) {
        t.acc_running += clock_ - t.running_since;
        transition(t, TrialState::TerminatedAtDeadline);
        cluster_.release(t);
        drop_live(t);
      } else if (t.state == TrialState::Paused) {
        transition(t, TrialState::TerminatedAtDeadline);
      } else {
        continue; // PendingStart keeps its atoms; terminal states are done
      }
      TraceRecord& rec = trace_.append(clock_, TraceKind::DeadlineTerminate);
      rec.trial = t.id;
      rec.iter = t.iter;
      rec.score = t.current_score;
      rec.atoms_before = atoms_before;
      rec.atoms_after = t.atoms;
      rec.state = t.state;
    }
    TraceRecord& rec = trace_.append(clock_, TraceKind::Deadline);
    rec.trial = -1;
    rec.state = TrialState::TerminatedAtDeadline;
  }

  void fill_free_capacity() {
    while (cluster_.free_atoms() >= 1) {
      EntranceEval eval = scheduler_->entrance_policy(clock_, live_);
      PromoteOrLaunchAction act = promote_or_launch(rungs_, eval.admit);
      if (act.kind == PromoteOrLaunchAction::Kind::Resume) {
        resume_trial(trials_[static_cast<std::size_t>(act.trial)]);
      } else if (act.kind == PromoteOrLaunchAction::Kind::Launch) {
        launch_trial(&eval);
      } else {
        break;
      }
    }
  }

  void drop_live(Trial& t) {
    auto it = std::find(live_.begin(), live_.end(), &t);
    if (it == live_.end()) throw std::logic_error("trial missing from live set");
    live_.erase(it);
  }

  void check_invariants() const {
    int live_atoms = 0;
    for (const Trial* t : live_) {
      if (!t->live()) throw std::logic_error("non-live trial in live set");
      if (t->atoms < 1) throw std::logic_error("live trial without atoms");
      live_atoms += t->atoms;
    }
    if (live_atoms != cluster_.used())
      throw std::logic_error("cluster accounting mismatch");
    if (cluster_.free_atoms() < 0 || cluster_.used() > cfg_.atoms)
      throw std::logic_error("atom conservation violated");
  }

  const ExperimentConfig cfg_;
  ClusterState cluster_;
  RungLadder rungs_;
  std::unique_ptr<Scheduler> scheduler_;
  RngStream rng_;
  std::deque<Trial> trials_; // stable addresses, id == index
  std::vector<Trial*> live_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, LaterEvent> queue_;
  EventTrace trace_;
  double clock_ = 0.0;
  std::int64_t next_seq_ = 0;
};

} // namespace

Metrics compute_metrics(const EventTrace& trace) {
  Metrics m;
  struct Last {
    double score = 0.0;
    std::int64_t iter = 0;
  };
  std::vector<Last> last; // indexed by trial id
  double running_max = 0.0;
  bool any = false;
  for (const TraceRecord& rec : trace.records) {
    if (rec.kind == TraceKind::Launch) {
      m.trial_count += 1;
      if (static_cast<std::size_t>(rec.trial) >= last.size())
        last.resize(static_cast<std::size_t>(rec.trial) + 1);
      last[static_cast<std::size_t>(rec.trial)] = Last{rec.score, 0};
    } else if (rec.kind == TraceKind::StepComplete) {
      last[static_cast<std::size_t>(rec.trial)] = Last{rec.score, rec.iter};
    } else {
      continue;
    }
    running_max = any ? std::max(running_max, rec.score) : rec.score;
    any = true;
    m.curve.push_back(CurvePoint{rec.time, running_max});
  }
  for (std::size_t id = 0; id < last.size(); ++id) {
    if (m.best_trial < 0 || last[id].score > m.max_score) {
      m.best_trial = static_cast<int>(id);
      m.max_score = last[id].score;
      m.top_trial_iters = last[id].iter;
    }
  }
  return m;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Engine engine(cfg);
  return engine.run();
}

} // namespace hypersim
