// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Multi-seed sweeps over experiment grids: preset grids mirroring the study
// sections, custom JSON sweep specs, a bounded worker pool, per-cell
// aggregation and CSV export, plus the summary-file comparison used by the
// CLI. All outputs are byte-deterministic for a fixed spec and seed list.

#pragma once

#include "hypersim/simulator.hpp"

#include <string>
#include <vector>

namespace hypersim {

struct SweepCell {
  std::string variant; // label used as the scheduler column in run rows
  ExperimentConfig cfg; // seed is overwritten per run
};

struct SweepSpec {
  std::string name;
  std::vector<SweepCell> cells;
  std::vector<std::uint64_t> seeds; // empty means the default 0..4
};

std::vector<std::string> preset_names();
SweepSpec preset_sweep(const std::string& name); // throws ConfigError
SweepSpec load_sweep_spec(const std::string& path);

// One run-summary row; the shared CSV schema is
// scheduler,seed,N,T,scaling,startup_delay,max_score,trial_count,top_trial_iters
struct RunRow {
  std::string label;
  std::uint64_t seed = 0;
  int atoms = 0;
  double deadline = 0.0;
  ScalingKind scaling = ScalingKind::Linear;
  double startup_delay = 0.0;
  double max_score = 0.0;
  int trial_count = 0;
  std::int64_t top_trial_iters = 0;
};

RunRow row_from_result(const std::string& label, const ExperimentResult& r);
std::string summary_csv(const std::vector<RunRow>& rows);
std::vector<RunRow> parse_summary_csv_text(const std::string& text);
std::vector<RunRow> parse_summary_csv(const std::string& path);

struct AggRow {
  std::string variant;
  int atoms = 0;
  double deadline = 0.0;
  ScalingKind scaling = ScalingKind::Linear;
  double startup_delay = 0.0;
  int seeds = 0;
  double mean_score = 0.0, spread_score = 0.0;
  double mean_trials = 0.0, spread_trials = 0.0;
  double mean_top_iter = 0.0, spread_top_iter = 0.0;
};

struct SweepOutput {
  std::vector<RunRow> runs;  // cells x seeds, enumeration order
  std::vector<AggRow> cells; // one row per cell
};

// Executes cells x seeds on up to `workers` threads. Each run is an isolated
// engine; rows land in pre-assigned slots so output order is deterministic.
SweepOutput run_sweep(const SweepSpec& spec,
                      const std::vector<std::uint64_t>& seeds, int workers);

std::string aggregate_csv(const std::vector<AggRow>& cells);

// Writes <name>.csv (aggregate) and <name>_runs_<variant>.csv per variant.
void write_sweep_files(const std::string& dir, const SweepSpec& spec,
                       const SweepOutput& out);

// Comparison of >= 2 summary files on the full condition key
// (N, T, scaling, startup_delay, seed); the first input is the baseline.
// Key mismatches and duplicate keys throw.
struct CompareCell {
  std::string label; // non-baseline input
  int atoms = 0;
  double deadline = 0.0;
  ScalingKind scaling = ScalingKind::Linear;
  double startup_delay = 0.0;
  double mean_delta = 0.0; // label minus baseline, mean over seeds
  int seeds = 0;
  bool flagged = false; // mean_delta < 0
};

struct CompareResult {
  std::vector<CompareCell> cells;
  std::string long_csv; // stacked per-run rows with a source column
};

CompareResult compare_summaries(const std::vector<std::vector<RunRow>>& inputs,
                                const std::vector<std::string>& labels);

} // namespace hypersim
