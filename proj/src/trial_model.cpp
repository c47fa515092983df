// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/trial_model.hpp"

#include <cmath>

namespace hypersim {

double score(const HyperparamSample& s, std::int64_t k) {
  double den = 0.01 * s.b0 * static_cast<double>(k) + 0.1 * s.b1 + 0.5;
  return (2.0 - (1.0 / den + 0.01 * s.b2)) / 2.0;
}

double scaling_factor(ScalingKind kind, int atoms) {
  switch (kind) {
    case ScalingKind::Linear: return static_cast<double>(atoms);
    case ScalingKind::Sqrt: return std::sqrt(static_cast<double>(atoms));
    case ScalingKind::None: return 1.0;
  }
  return 1.0;
}

double step_duration(ScalingKind kind, int atoms, double base_step_time) {
  return base_step_time / scaling_factor(kind, atoms);
}

double rate(ScalingKind kind, int atoms, double base_step_time) {
  return 1.0 / step_duration(kind, atoms, base_step_time);
}

HyperparamSample sample_hyperparams(RngStream& stream, double exp_scale) {
  HyperparamSample s;
  s.b0 = stream.exponential(exp_scale);
  s.b1 = stream.uniform01();
  s.b2 = stream.uniform01();
  return s;
}

} // namespace hypersim
