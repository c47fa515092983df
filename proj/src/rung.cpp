// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/rung.hpp"

#include <stdexcept>

namespace hypersim {

std::int64_t Rung::record(int trial_id, double score) {
  std::int64_t arrival = next_arrival_++;
  rest_.insert(RungRecordKey{score, arrival, trial_id});
  rebalance();
  return arrival;
}

void Rung::rebalance() {
  std::size_t k = top_k();
  while (top_.size() < k && !rest_.empty()) {
    top_.insert(rest_.extract(rest_.begin()));
  }
  if (!top_.empty() && !rest_.empty()) {
    // A single insert can leave the best of rest_ above the top_ boundary.
    auto boundary = std::prev(top_.end());
    if (BetterRecord{}(*rest_.begin(), *boundary)) {
      rest_.insert(top_.extract(boundary));
      top_.insert(rest_.extract(rest_.begin()));
    }
  }
}

std::optional<double> Rung::cutoff_score() const {
  if (top_.empty()) return std::nullopt;
  return std::prev(top_.end())->score;
}

std::optional<RungRecordKey> Rung::promotable() const {
  if (floor_k() == 0 || paused_.empty()) return std::nullopt;
  const RungRecordKey& cand = *paused_.begin();
  // floor_k() >= 1 implies top_k() == floor_k(), so membership in top_ is
  // exactly "ranked within the top floor(n/eta)".
  if (top_.find(cand) != top_.end()) return cand;
  return std::nullopt;
}

RungLadder::RungLadder(std::int64_t r, std::int64_t eta, std::int64_t R,
                       bool lifted) {
  for (std::int64_t m : rung_milestones(r, eta, R)) {
    rungs_.emplace_back(m, eta, lifted);
  }
}

Rung& RungLadder::at_milestone(std::int64_t m) {
  for (Rung& rung : rungs_) {
    if (rung.milestone() == m) return rung;
  }
  throw std::logic_error("no rung at requested milestone");
}

namespace {

RungRecordKey key_for(const Trial& t, std::int64_t milestone) {
  return RungRecordKey{t.rung_scores.at(milestone), t.rung_arrival.at(milestone),
                       t.id};
}

} // namespace

void RungLadder::mark_paused(const Trial& t) {
  if (t.rung_scores.empty())
    throw std::logic_error("paused trial has no recorded rung");
  std::int64_t m = t.rung_scores.rbegin()->first;
  at_milestone(m).mark_paused(key_for(t, m));
}

void RungLadder::unmark_paused(const Trial& t) {
  std::int64_t m = t.rung_scores.rbegin()->first;
  at_milestone(m).unmark_paused(key_for(t, m));
}

std::optional<RungRecordKey> RungLadder::find_promotable() const {
  for (auto it = rungs_.rbegin(); it != rungs_.rend(); ++it) {
    if (auto cand = it->promotable()) return cand;
  }
  return std::nullopt;
}

} // namespace hypersim
