// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Synthetic workload: a parametric learning curve plus the speedup model that
// maps an atom allocation to a step duration.

#pragma once

#include "hypersim/core.hpp"
#include "hypersim/rng.hpp"

namespace hypersim {

// Learning-curve value after k completed steps:
//   score(k) = (2 - (1 / (0.01*b0*k + 0.1*b1 + 0.5) + 0.01*b2)) / 2
// Monotone non-decreasing in k, bounded above by 1 and below by -0.005.
// No clamping is applied.
double score(const HyperparamSample& s, std::int64_t k);

// Speedup factor relative to a single atom.
double scaling_factor(ScalingKind kind, int atoms);

// Duration of one step at the given allocation.
double step_duration(ScalingKind kind, int atoms, double base_step_time);

// Steps per simulated time unit, i.e. 1 / step_duration.
double rate(ScalingKind kind, int atoms, double base_step_time);

// b1, b2 ~ Uniform[0,1); b0 ~ Exponential(mean exp_scale). Draw order is
// b0, b1, b2 and is part of the determinism contract.
HyperparamSample sample_hyperparams(RngStream& stream, double exp_scale);

} // namespace hypersim
