// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/allocator.hpp"

#include "hypersim/trial_model.hpp"

#include <stdexcept>

namespace hypersim {

void ClusterState::acquire(Trial& t, int n) {
  if (n < 1) throw std::logic_error("acquire of non-positive atom count");
  if (n > free_) throw std::logic_error("cluster over-allocation");
  free_ -= n;
  t.atoms += n;
}

void ClusterState::release(Trial& t) {
  free_ += t.atoms;
  t.atoms = 0;
  if (free_ > total_) throw std::logic_error("cluster release underflow");
}

std::vector<int> uniform_allocation(std::size_t live, int total) {
  if (live == 0) throw std::logic_error("uniform_allocation with no trials");
  if (live > static_cast<std::size_t>(total))
    throw std::logic_error("more live trials than atoms");
  int base = total / static_cast<int>(live);
  int extra = total % static_cast<int>(live);
  std::vector<int> out(live, base);
  for (int i = 0; i < extra; ++i) out[static_cast<std::size_t>(i)] += 1;
  return out;
}

bool resize_gain_check(int current_atoms, int proposed_atoms, double t_n,
                       double t_o, ScalingKind model, double base_step_time) {
  double gained = (t_n - t_o) * rate(model, proposed_atoms, base_step_time);
  double status_quo = t_n * rate(model, current_atoms, base_step_time);
  return gained > status_quo;
}

ResizePlan apply_resize(Trial& t, int new_atoms, ClusterState& cluster,
                        double now, double startup_delay) {
  if (new_atoms == t.atoms)
    throw std::logic_error("resize to the current allocation");
  if (new_atoms > t.atoms + cluster.free_atoms()) {
    return ResizePlan{false, 0.0}; // not enough free atoms this round
  }
  if (t.state == TrialState::Running) {
    t.acc_running += now - t.running_since;
  }
  cluster.release(t);
  cluster.acquire(t, new_atoms);
  t.state = TrialState::PendingStart;
  t.iters_since_resize = 0;
  return ResizePlan{true, now + startup_delay};
}

} // namespace hypersim
