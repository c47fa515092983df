// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/schedulers.hpp"

#include <doctest.h>

#include <memory>
#include <vector>

using namespace hypersim;

namespace {

struct Bench {
  explicit Bench(const ExperimentConfig& c)
      : cfg(c),
        cluster(c.atoms),
        rungs(c.min_epochs, c.eta, c.max_epochs, lifted_cutoffs(c)),
        scheduler(make_scheduler(c)) {}

  SchedulerDecision step(Trial& t, double now, double dur = 0.1) {
    ScheduleContext ctx{now, dur, cfg, cluster, rungs, live, trace};
    return scheduler->schedule(t, ctx);
  }

  Trial& add_trial(double score0) {
    trials.push_back(std::make_unique<Trial>());
    Trial& t = *trials.back();
    t.id = static_cast<int>(trials.size()) - 1;
    t.state = TrialState::Running;
    t.current_score = score0;
    cluster.acquire(t, 1);
    live.push_back(&t);
    return t;
  }

  ExperimentConfig cfg;
  ClusterState cluster;
  RungLadder rungs;
  std::unique_ptr<Scheduler> scheduler;
  std::vector<std::unique_ptr<Trial>> trials;
  std::vector<Trial*> live;
  EventTrace trace;
};

} // namespace

TEST_CASE("deadline entrance follows min(R*t_a, eta*t_f) < T_n") {
  ExperimentConfig cfg;
  cfg.scheduler = SchedulerKind::HyperSched;
  cfg.deadline = 40.0;
  cfg.atoms = 4;
  cfg.max_epochs = 500;
  cfg.eta = 3;
  cfg.base_step_time = 0.1; // t_a prior with no completed steps
  auto sched = make_scheduler(cfg);

  Trial t;
  t.id = 0;
  t.state = TrialState::PendingStart; // running_time == acc_running
  t.atoms = 1;

  // Hand evaluation: min(500*0.1, 10*3) = 30 < 40 -> admit.
  t.acc_running = 10.0;
  std::vector<Trial*> live{&t};
  EntranceEval ok = sched->entrance_policy(0.0, live);
  CHECK(ok.admit);
  CHECK(ok.deadline_inputs);
  CHECK(ok.t_a == doctest::Approx(0.1));
  CHECK(ok.t_f == doctest::Approx(10.0));

  // Hand evaluation: min(500*0.1, 20*3) = 50 >= 40 -> refuse.
  t.acc_running = 20.0;
  CHECK_FALSE(sched->entrance_policy(0.0, live).admit);

  // The same inputs pass again once the remaining window is irrelevant only
  // through t_f: later in the run T_n shrinks below the estimate.
  t.acc_running = 10.0;
  CHECK(sched->entrance_policy(0.0, live).admit);
  CHECK_FALSE(sched->entrance_policy(15.0, live).admit); // T_n = 25 < 30

  // A full cluster refuses regardless of the time estimate.
  t.acc_running = 0.0;
  t.atoms = 4;
  CHECK_FALSE(sched->entrance_policy(0.0, live).admit);
}

TEST_CASE("capacity entrance admits while live trials are below the pool") {
  ExperimentConfig cfg;
  cfg.scheduler = SchedulerKind::Asha;
  cfg.atoms = 2;
  auto sched = make_scheduler(cfg);

  Trial a, b;
  a.id = 0;
  b.id = 1;
  std::vector<Trial*> live;
  CHECK(sched->entrance_policy(0.0, live).admit);
  live.push_back(&a);
  CHECK(sched->entrance_policy(0.0, live).admit);
  live.push_back(&b);
  CHECK_FALSE(sched->entrance_policy(0.0, live).admit);
  CHECK_FALSE(sched->entrance_policy(0.0, live).deadline_inputs);
}

TEST_CASE("asha rung gate: first arrival pauses, rank 1 of 3 continues") {
  ExperimentConfig cfg;
  cfg.scheduler = SchedulerKind::Asha;
  cfg.atoms = 8;
  cfg.eta = 3;
  Bench bench(cfg);

  // floor(1/3) = 0: the first trial to reach a rung is always paused.
  Trial& a = bench.add_trial(0.5);
  a.iter = 1;
  CHECK(bench.step(a, 0.1).verdict == Verdict::Pause);

  Trial& b = bench.add_trial(0.9);
  b.iter = 1;
  CHECK(bench.step(b, 0.2).verdict == Verdict::Pause); // floor(2/3) = 0

  // Third record makes floor(3/3) = 1; the best of the three survives.
  Trial& c = bench.add_trial(0.95);
  c.iter = 1;
  CHECK(bench.step(c, 0.3).verdict == Verdict::Continue);

  // A fourth, mid-pack arrival still pauses (cutoff is 0.95).
  Trial& d = bench.add_trial(0.92);
  d.iter = 1;
  CHECK(bench.step(d, 0.4).verdict == Verdict::Pause);

  // Trials stop exactly at the step cap.
  Trial& e = bench.add_trial(0.99);
  e.iter = cfg.max_epochs;
  CHECK(bench.step(e, 0.5).verdict == Verdict::Stop);
}

TEST_CASE("speculative monitoring pauses retroactively at the next step") {
  ExperimentConfig cfg;
  cfg.scheduler = SchedulerKind::HyperSched;
  cfg.atoms = 8;
  cfg.eta = 3;
  cfg.resize = false;
  cfg.deadline = 100.0;
  Bench bench(cfg);

  // The lifted cutoff (max(1, floor(n/3))) lets the first arrival continue.
  Trial& a = bench.add_trial(0.30);
  a.iter = 1;
  CHECK(bench.step(a, 0.1).verdict == Verdict::Continue);

  // Three better rivals record at the same rung afterwards.
  Trial& b = bench.add_trial(0.9);
  b.iter = 1;
  CHECK(bench.step(b, 0.2).verdict == Verdict::Continue); // ties the cutoff

  Trial& c = bench.add_trial(0.8);
  c.iter = 1;
  CHECK(bench.step(c, 0.3).verdict == Verdict::Pause); // below lifted cutoff

  Trial& d = bench.add_trial(0.7);
  d.iter = 1;
  CHECK(bench.step(d, 0.4).verdict == Verdict::Pause);

  // At its own next decision point the early trial re-checks the passed rung
  // (cutoff now 0.9 with k = max(1, floor(4/3)) = 1) and pauses.
  a.iter = 2;
  a.current_score = 0.35;
  CHECK(bench.step(a, 0.5).verdict == Verdict::Pause);
}

TEST_CASE("non-speculative hypersched only gates rungs recorded this step") {
  ExperimentConfig cfg;
  cfg.scheduler = SchedulerKind::HyperSched;
  cfg.speculative = false;
  cfg.atoms = 8;
  cfg.eta = 3;
  cfg.resize = false;
  cfg.deadline = 100.0;
  Bench bench(cfg);

  Trial& a = bench.add_trial(0.30);
  a.iter = 1;
  // floor(1/3) = 0 without the lift: first arrival pauses, as in plain asha.
  CHECK(bench.step(a, 0.1).verdict == Verdict::Pause);

  Trial& b = bench.add_trial(0.9);
  b.iter = 1;
  CHECK(bench.step(b, 0.2).verdict == Verdict::Pause);

  Trial& c = bench.add_trial(0.5);
  c.iter = 1;
  CHECK(bench.step(c, 0.3).verdict == Verdict::Pause); // cutoff 0.9

  // A trial past the rung is never re-checked between milestones.
  Trial& d = bench.add_trial(0.95);
  d.iter = 1;
  CHECK(bench.step(d, 0.4).verdict == Verdict::Continue);
  d.iter = 2;
  d.current_score = 0.96;
  CHECK(bench.step(d, 0.5).verdict == Verdict::Continue);
}

TEST_CASE("resize proposals respect cooldown, pool, gain check and growth") {
  ExperimentConfig cfg;
  cfg.scheduler = SchedulerKind::HyperSched;
  cfg.atoms = 4;
  cfg.eta = 3;
  cfg.cooldown = 2;
  cfg.deadline = 100.0;
  cfg.startup_delay = 0.0;
  Bench bench(cfg);

  Trial& a = bench.add_trial(0.6);
  a.iter = 1;
  a.iters_since_resize = 1;
  // Below the cooldown: plain continue even though 4 atoms are deserved.
  SchedulerDecision d1 = bench.step(a, 0.1);
  CHECK(d1.verdict == Verdict::Continue);
  CHECK_FALSE(d1.resize_to.has_value());

  a.iter = 2;
  a.iters_since_resize = 2;
  SchedulerDecision d2 = bench.step(a, 0.2);
  CHECK_FALSE(d2.resize_to.has_value()); // strict: must exceed the cooldown

  a.iter = 4; // skip the milestone at 3 to keep the gate out of the way
  a.rung_scores[3] = a.current_score;
  a.rung_arrival[3] = bench.rungs.at_milestone(3).record(a.id, a.current_score);
  a.iters_since_resize = 3;
  SchedulerDecision d3 = bench.step(a, 0.3);
  CHECK(d3.verdict == Verdict::Continue);
  REQUIRE(d3.resize_to.has_value());
  CHECK(*d3.resize_to == 4); // alone on the cluster: the full pool

  // With NONE scaling the gain check refuses every growth.
  ExperimentConfig flat = cfg;
  flat.scaling = ScalingKind::None;
  Bench bench2(flat);
  Trial& f = bench2.add_trial(0.6);
  f.iter = 4;
  f.rung_scores[1] = 0.6;
  f.rung_arrival[1] = bench2.rungs.at_milestone(1).record(f.id, 0.6);
  f.rung_scores[3] = 0.6;
  f.rung_arrival[3] = bench2.rungs.at_milestone(3).record(f.id, 0.6);
  f.iters_since_resize = 10;
  SchedulerDecision flat_d = bench2.step(f, 0.3);
  CHECK(flat_d.verdict == Verdict::Continue);
  CHECK_FALSE(flat_d.resize_to.has_value());

  // A shrinking share is never proposed: two equally ranked trials on a
  // 4-atom pool deserve 2 each, so a 3-atom trial stays put.
  ExperimentConfig pair_cfg = cfg;
  Bench bench3(pair_cfg);
  Trial& g = bench3.add_trial(0.9);
  bench3.cluster.acquire(g, 2); // 3 atoms total
  Trial& h = bench3.add_trial(0.1);
  g.iter = 4;
  g.rung_scores[1] = 0.9;
  g.rung_arrival[1] = bench3.rungs.at_milestone(1).record(g.id, 0.9);
  g.rung_scores[3] = 0.9;
  g.rung_arrival[3] = bench3.rungs.at_milestone(3).record(g.id, 0.9);
  g.iters_since_resize = 10;
  h.iters_since_resize = 10;
  SchedulerDecision keep = bench3.step(g, 0.4);
  CHECK_FALSE(keep.resize_to.has_value()); // target 2 < current 3

  // The pool constraint: deserved growth larger than the free atoms waits.
  ExperimentConfig big = cfg;
  big.atoms = 8;
  Bench bench4(big);
  Trial& p = bench4.add_trial(0.9);
  Trial& q = bench4.add_trial(0.5);
  Trial& blocker = bench4.add_trial(0.2);
  bench4.cluster.acquire(blocker, 4); // blocker holds 5, free = 1
  p.iter = 4;
  p.rung_scores[1] = 0.9;
  p.rung_arrival[1] = bench4.rungs.at_milestone(1).record(p.id, 0.9);
  p.rung_scores[3] = 0.9;
  p.rung_arrival[3] = bench4.rungs.at_milestone(3).record(p.id, 0.9);
  p.iters_since_resize = 10;
  q.iters_since_resize = 10;
  // Uniform share over 3 live trials of 8 atoms is [3, 3, 2]; p deserves 3
  // but growing by 2 exceeds the single free atom.
  SchedulerDecision wait = bench4.step(p, 0.5);
  CHECK_FALSE(wait.resize_to.has_value());
}

TEST_CASE("fixed-fraction entrance closes at the exploration boundary") {
  ExperimentConfig cfg;
  cfg.scheduler = SchedulerKind::FixedFraction;
  cfg.exploration_fraction = 0.5;
  cfg.deadline = 20.0;
  cfg.atoms = 4;
  auto sched = make_scheduler(cfg);

  std::vector<Trial*> live;
  CHECK(sched->entrance_policy(9.9, live).admit);
  CHECK_FALSE(sched->entrance_policy(10.0, live).admit);
  CHECK_FALSE(sched->entrance_policy(15.0, live).admit);

  Trial a, b, c, d;
  a.id = 0;
  b.id = 1;
  c.id = 2;
  d.id = 3;
  live = {&a, &b, &c, &d};
  CHECK_FALSE(sched->entrance_policy(1.0, live).admit); // full
}

TEST_CASE("fixed-fraction resizes only after the exploration window") {
  ExperimentConfig cfg;
  cfg.scheduler = SchedulerKind::FixedFraction;
  cfg.exploration_fraction = 0.5;
  cfg.deadline = 20.0;
  cfg.atoms = 4;
  cfg.cooldown = 0;
  Bench bench(cfg);

  Trial& a = bench.add_trial(0.6);
  a.iter = 2;
  a.rung_scores[1] = 0.6;
  a.rung_arrival[1] = bench.rungs.at_milestone(1).record(a.id, 0.6);
  a.iters_since_resize = 5;

  SchedulerDecision before = bench.step(a, 5.0);
  CHECK(before.verdict == Verdict::Continue);
  CHECK_FALSE(before.resize_to.has_value());

  a.iter = 4;
  a.rung_scores[3] = 0.6;
  a.rung_arrival[3] = bench.rungs.at_milestone(3).record(a.id, 0.6);
  SchedulerDecision after = bench.step(a, 12.0);
  CHECK(after.verdict == Verdict::Continue);
  REQUIRE(after.resize_to.has_value());
  CHECK(*after.resize_to == 4);
}

TEST_CASE("promotion precedes launches and needs a ranked paused resident") {
  RungLadder ladder(1, 3, 500, /*lifted=*/false);

  // Nothing paused, entrance closed: free atoms stay free.
  PromoteOrLaunchAction none = promote_or_launch(ladder, false);
  CHECK(none.kind == PromoteOrLaunchAction::Kind::None);

  // Nothing paused, entrance open: launch.
  PromoteOrLaunchAction launch = promote_or_launch(ladder, true);
  CHECK(launch.kind == PromoteOrLaunchAction::Kind::Launch);

  // A ranked paused resident wins over a launch even with the entrance open.
  Trial t;
  t.id = 5;
  t.rung_scores[1] = 0.9;
  t.rung_arrival[1] = ladder.at_milestone(1).record(5, 0.9);
  ladder.at_milestone(1).record(6, 0.4);
  ladder.at_milestone(1).record(7, 0.3);
  ladder.mark_paused(t);
  PromoteOrLaunchAction resume = promote_or_launch(ladder, true);
  CHECK(resume.kind == PromoteOrLaunchAction::Kind::Resume);
  CHECK(resume.trial == 5);
}
