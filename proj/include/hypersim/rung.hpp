// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Rung ladder bookkeeping. Each rung keeps its recorded scores split into a
// top-k set and a rest set so the cutoff (k-th best score) and promotion-rank
// queries stay O(log n); churn-heavy configs record tens of thousands of
// scores per rung and a sorted vector would make inserts quadratic.

#pragma once

#include "hypersim/core.hpp"

#include <cstddef>
#include <set>

namespace hypersim {

// Records order best-first: higher score, then earlier arrival, then lower id.
struct RungRecordKey {
  double score = 0.0;
  std::int64_t arrival = 0;
  int trial = -1;
};

struct BetterRecord {
  bool operator()(const RungRecordKey& a, const RungRecordKey& b) const {
    if (a.score != b.score) return a.score > b.score;
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    return a.trial < b.trial;
  }
};

class Rung {
 public:
  Rung(std::int64_t milestone, std::int64_t eta, bool lifted)
      : milestone_(milestone), eta_(eta), lifted_(lifted) {}

  std::int64_t milestone() const { return milestone_; }
  std::size_t size() const { return top_.size() + rest_.size(); }

  // Survivor-set size used for pause cutoffs (lifted keeps first arrivals).
  std::size_t top_k() const { return top_k_count(size(), eta_, lifted_); }
  // Promotion always uses the unlifted count.
  std::size_t floor_k() const { return top_k_count(size(), eta_, false); }

  // Inserts a score; returns the arrival index (0-based, per rung).
  std::int64_t record(int trial_id, double score);

  // Score of the top_k()-th best record, or nullopt while top_k() == 0.
  std::optional<double> cutoff_score() const;

  // Paused residents: trials whose highest recorded rung is this one.
  void mark_paused(const RungRecordKey& key) { paused_.insert(key); }
  void unmark_paused(const RungRecordKey& key) { paused_.erase(key); }

  // Best paused resident that ranks within the top floor_k() records.
  std::optional<RungRecordKey> promotable() const;

 private:
  void rebalance();

  std::int64_t milestone_;
  std::int64_t eta_;
  bool lifted_;
  std::int64_t next_arrival_ = 0;
  std::set<RungRecordKey, BetterRecord> top_;    // exactly top_k() best records
  std::set<RungRecordKey, BetterRecord> rest_;
  std::set<RungRecordKey, BetterRecord> paused_;
};

class RungLadder {
 public:
  RungLadder(std::int64_t r, std::int64_t eta, std::int64_t R, bool lifted);

  std::vector<Rung>& rungs() { return rungs_; }
  const std::vector<Rung>& rungs() const { return rungs_; }

  Rung& at_milestone(std::int64_t m);

  // Registers the paused trial in its residence rung (highest recorded).
  void mark_paused(const Trial& t);
  void unmark_paused(const Trial& t);

  // Scans rungs from highest to lowest for a promotable paused trial.
  std::optional<RungRecordKey> find_promotable() const;

 private:
  std::vector<Rung> rungs_; // ascending milestones
};

} // namespace hypersim
