// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/schedulers.hpp"

#include "hypersim/trial_model.hpp"

#include <algorithm>

namespace hypersim {

namespace {

// Records the trial at every rung milestone it has reached but not recorded
// yet (with unit steps this is the single rung equal to iter, if any).
// Returns the rungs touched at this decision point.
std::vector<Rung*> record_reached_rungs(Trial& t, ScheduleContext& ctx) {
  std::vector<Rung*> touched;
  for (Rung& rung : ctx.rungs.rungs()) {
    std::int64_t m = rung.milestone();
    if (m > t.iter) break;
    if (t.rung_scores.count(m)) continue;
    std::int64_t arrival = rung.record(t.id, t.current_score);
    t.rung_scores[m] = t.current_score;
    t.rung_arrival[m] = arrival;
    TraceRecord& rec = ctx.trace.append(ctx.now, TraceKind::RungRecord);
    rec.trial = t.id;
    rec.iter = t.iter;
    rec.score = t.current_score;
    rec.atoms_before = rec.atoms_after = t.atoms;
    rec.state = t.state;
    rec.rung = m;
    rec.rung_n = static_cast<std::int64_t>(rung.size());
    touched.push_back(&rung);
  }
  return touched;
}

// Pause rule at a rung: out while the survivor set is empty, otherwise a
// strict score comparison against the cutoff (ties survive).
bool below_cutoff(const Trial& t, const Rung& rung) {
  auto cutoff = rung.cutoff_score();
  if (!cutoff) return true;
  return t.rung_scores.at(rung.milestone()) < *cutoff;
}

// Uniform-allocation target for this trial among the live set ranked by
// current score (ties to the lower id).
int uniform_target(const Trial& t, const std::vector<Trial*>& live,
                   int total_atoms) {
  std::vector<const Trial*> ranked(live.begin(), live.end());
  std::sort(ranked.begin(), ranked.end(),
            [](const Trial* a, const Trial* b) {
              if (a->current_score != b->current_score)
                return a->current_score > b->current_score;
              return a->id < b->id;
            });
  std::vector<int> shares =
      uniform_allocation(ranked.size(), total_atoms);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i]->id == t.id) return shares[i];
  }
  return t.atoms; // not live (cannot happen at a decision point)
}

// Shared resize proposal: grow toward the uniform share when the cooldown has
// passed, the pool can cover it and the remaining-time gain check accepts.
std::optional<int> propose_resize(Trial& t, ScheduleContext& ctx,
                                  const ProfilerState& prof) {
  int target = uniform_target(t, ctx.live, ctx.cfg.atoms);
  if (target <= t.atoms) return std::nullopt;
  if (t.iters_since_resize <= ctx.cfg.cooldown) return std::nullopt;
  if (target - t.atoms > ctx.cluster.free_atoms()) return std::nullopt;
  double t_n = ctx.cfg.deadline - ctx.now;
  if (!resize_gain_check(t.atoms, target, t_n, prof.t_o(), prof.model(),
                         ctx.cfg.base_step_time))
    return std::nullopt;
  return target;
}

class AshaScheduler final : public Scheduler {
 public:
  explicit AshaScheduler(const ExperimentConfig& cfg) : cfg_(cfg) {}

  EntranceEval entrance_policy(double, const std::vector<Trial*>& live) override {
    return EntranceEval{live.size() < static_cast<std::size_t>(cfg_.atoms),
                        false, 0.0, 0.0};
  }

  SchedulerDecision schedule(Trial& t, ScheduleContext& ctx) override {
    if (t.iter >= cfg_.max_epochs) return {Verdict::Stop, std::nullopt};
    for (Rung* rung : record_reached_rungs(t, ctx)) {
      if (below_cutoff(t, *rung)) return {Verdict::Pause, std::nullopt};
    }
    return {Verdict::Continue, std::nullopt};
  }

 private:
  const ExperimentConfig cfg_;
};

class HyperSchedScheduler final : public Scheduler {
 public:
  explicit HyperSchedScheduler(const ExperimentConfig& cfg)
      : cfg_(cfg),
        prof_(cfg.profile ? cfg.scaling : ScalingKind::Linear,
              cfg.base_step_time, cfg.startup_delay, cfg.profile) {}

  EntranceEval entrance_policy(double now,
                               const std::vector<Trial*>& live) override {
    if (cfg_.entrance == EntranceKind::Capacity) {
      return EntranceEval{live.size() < static_cast<std::size_t>(cfg_.atoms),
                          false, 0.0, 0.0};
    }
    int allocated = 0;
    double t_f = 0.0;
    for (const Trial* t : live) {
      allocated += t->atoms;
      t_f = std::max(t_f, t->running_time(now));
    }
    double t_a = prof_.t_a();
    double t_n = cfg_.deadline - now;
    bool admit = allocated < cfg_.atoms &&
                 std::min(static_cast<double>(cfg_.max_epochs) * t_a,
                          t_f * static_cast<double>(cfg_.eta)) < t_n;
    return EntranceEval{admit, true, t_a, t_f};
  }

  SchedulerDecision schedule(Trial& t, ScheduleContext& ctx) override {
    prof_.observe_step(ctx.step_duration, t.atoms);
    if (t.iter >= cfg_.max_epochs) return {Verdict::Stop, std::nullopt};
    std::vector<Rung*> touched = record_reached_rungs(t, ctx);
    if (cfg_.speculative) {
      // Re-evaluate every passed rung: a rival recording later can push this
      // trial below a cutoff it once cleared (the pause is retroactive but
      // takes effect only here, at the trial's own decision point).
      for (Rung& rung : ctx.rungs.rungs()) {
        if (rung.milestone() > t.iter) break;
        if (below_cutoff(t, rung)) return {Verdict::Pause, std::nullopt};
      }
    } else {
      for (Rung* rung : touched) {
        if (below_cutoff(t, *rung)) return {Verdict::Pause, std::nullopt};
      }
    }
    if (cfg_.resize) {
      if (auto target = propose_resize(t, ctx, prof_)) {
        return {Verdict::Continue, target};
      }
    }
    return {Verdict::Continue, std::nullopt};
  }

  void on_startup_complete(Trial&, double overhead) override {
    prof_.observe_overhead(overhead);
  }

  const ProfilerState* profiler() const override { return &prof_; }

 private:
  const ExperimentConfig cfg_;
  ProfilerState prof_;
};

// Explores with ASHA's rung logic while now < fraction * deadline, then
// closes the entrance and reallocates like the dynamic policy.
class FixedFractionScheduler final : public Scheduler {
 public:
  explicit FixedFractionScheduler(const ExperimentConfig& cfg)
      : cfg_(cfg),
        prof_(cfg.profile ? cfg.scaling : ScalingKind::Linear,
              cfg.base_step_time, cfg.startup_delay, cfg.profile) {}

  EntranceEval entrance_policy(double now,
                               const std::vector<Trial*>& live) override {
    bool admit = now < cfg_.exploration_fraction * cfg_.deadline &&
                 live.size() < static_cast<std::size_t>(cfg_.atoms);
    return EntranceEval{admit, false, 0.0, 0.0};
  }

  SchedulerDecision schedule(Trial& t, ScheduleContext& ctx) override {
    prof_.observe_step(ctx.step_duration, t.atoms);
    if (t.iter >= cfg_.max_epochs) return {Verdict::Stop, std::nullopt};
    for (Rung* rung : record_reached_rungs(t, ctx)) {
      if (below_cutoff(t, *rung)) return {Verdict::Pause, std::nullopt};
    }
    if (cfg_.resize && ctx.now >= cfg_.exploration_fraction * cfg_.deadline) {
      if (auto target = propose_resize(t, ctx, prof_)) {
        return {Verdict::Continue, target};
      }
    }
    return {Verdict::Continue, std::nullopt};
  }

  void on_startup_complete(Trial&, double overhead) override {
    prof_.observe_overhead(overhead);
  }

  const ProfilerState* profiler() const override { return &prof_; }

 private:
  const ExperimentConfig cfg_;
  ProfilerState prof_;
};

} // namespace

bool lifted_cutoffs(const ExperimentConfig& cfg) {
  return cfg.scheduler == SchedulerKind::HyperSched && cfg.speculative;
}

std::unique_ptr<Scheduler> make_scheduler(const ExperimentConfig& cfg) {
  switch (cfg.scheduler) {
    case SchedulerKind::Asha:
      return std::make_unique<AshaScheduler>(cfg);
    case SchedulerKind::HyperSched:
      return std::make_unique<HyperSchedScheduler>(cfg);
    case SchedulerKind::FixedFraction:
      return std::make_unique<FixedFractionScheduler>(cfg);
  }
  throw std::logic_error("unknown scheduler kind");
}

PromoteOrLaunchAction promote_or_launch(const RungLadder& rungs,
                                        bool entrance_ok) {
  if (auto cand = rungs.find_promotable()) {
    return {PromoteOrLaunchAction::Kind::Resume, cand->trial};
  }
  if (entrance_ok) {
    return {PromoteOrLaunchAction::Kind::Launch, -1};
  }
  return {PromoteOrLaunchAction::Kind::None, -1};
}

} // namespace hypersim
