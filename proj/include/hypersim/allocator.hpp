// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Atom accounting and the resize policy primitives: round-robin uniform
// shares over score-ranked live trials, and the gain check that accepts a
// resize only when the remaining-time step count improves despite paying the
// restart overhead.

#pragma once

#include "hypersim/core.hpp"

namespace hypersim {

class ClusterState {
 public:
  explicit ClusterState(int total) : total_(total), free_(total) {}

  int total() const { return total_; }
  int free_atoms() const { return free_; }
  int used() const { return total_ - free_; }

  void acquire(Trial& t, int n); // throws on over-allocation
  void release(Trial& t);        // returns the trial's atoms to the pool

 private:
  int total_;
  int free_;
};

// Round-robin deal of `total` atoms over `live` trials ranked best-first:
// the first (total % live) ranks get one extra atom. Requires 1 <= live and
// live <= total so every live trial keeps at least one atom.
std::vector<int> uniform_allocation(std::size_t live, int total);

// Accept a resize only if the steps achievable in the remaining time T_n,
// after paying the restart overhead t_o, strictly beat staying put:
//   (T_n - t_o) * rate(new) > T_n * rate(current)
bool resize_gain_check(int current_atoms, int proposed_atoms, double t_n,
                       double t_o, ScalingKind model, double base_step_time);

struct ResizePlan {
  bool applied = false;
  double restart_at = 0.0; // startup completion time when applied
};

// Moves a running trial to a new allocation: releases its atoms, acquires the
// new share, parks it in PendingStart and charges the startup overhead. Skips
// (applied=false) when the pool cannot cover the growth this round.
ResizePlan apply_resize(Trial& t, int new_atoms, ClusterState& cluster,
                        double now, double startup_delay);

} // namespace hypersim
