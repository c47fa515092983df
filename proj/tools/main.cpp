// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// hypersim CLI: single experiment runs, multi-seed sweeps over preset or
// custom grids, and comparison of run-summary CSV files.

#include "hypersim/config_io.hpp"
#include "hypersim/csv.hpp"
#include "hypersim/simulator.hpp"
#include "hypersim/sweep.hpp"
#include "hypersim/trace.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("HYPERSIM_OUT"); env && *env) return env;
  return ".";
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "."
                                                    : path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

int cmd_run(const std::string& config_path, const std::string& out_flag,
            std::optional<std::uint64_t> seed) {
  hypersim::ExperimentConfig cfg = hypersim::load_config(config_path);
  if (seed) cfg.seed = *seed;
  hypersim::ExperimentResult r = hypersim::run_experiment(cfg);

  fs::path out_dir = resolve_out(out_flag);
  std::string stem = fs::path(config_path).stem().string();
  write_file(out_dir / (stem + "_trace.jsonl"),
             hypersim::trace_to_jsonl(r.config, r.trace));
  write_file(out_dir / (stem + "_summary.csv"),
             hypersim::summary_csv({hypersim::row_from_result(
                 to_string(cfg.scheduler), r)}));

  std::cout << "scheduler=" << to_string(cfg.scheduler) << " seed=" << cfg.seed
            << " N=" << cfg.atoms << " T=" << hypersim::fmt_double(cfg.deadline)
            << " max_score=" << hypersim::fmt_double(r.metrics.max_score)
            << " trials=" << r.metrics.trial_count
            << " top_trial_iters=" << r.metrics.top_trial_iters << "\n";
  return 0;
}

int cmd_sweep(const std::string& preset, const std::string& spec_path,
              const std::string& out_flag,
              const std::vector<std::uint64_t>& seeds, int workers) {
  hypersim::SweepSpec spec = !spec_path.empty()
                                 ? hypersim::load_sweep_spec(spec_path)
                                 : hypersim::preset_sweep(preset);
  hypersim::SweepOutput out = hypersim::run_sweep(spec, seeds, workers);
  std::string dir = resolve_out(out_flag);
  hypersim::write_sweep_files(dir, spec, out);
  std::cout << "sweep " << spec.name << ": " << out.runs.size() << " runs, "
            << out.cells.size() << " cells -> " << dir << "\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& files,
                const std::string& out_flag) {
  std::vector<std::vector<hypersim::RunRow>> inputs;
  std::vector<std::string> labels;
  for (const std::string& f : files) {
    inputs.push_back(hypersim::parse_summary_csv(f));
    labels.push_back(fs::path(f).stem().string());
  }
  hypersim::CompareResult result =
      hypersim::compare_summaries(inputs, labels);

  std::cout << "baseline: " << labels[0] << "\n";
  for (const auto& c : result.cells) {
    std::cout << c.label << " N=" << c.atoms
              << " T=" << hypersim::fmt_double(c.deadline)
              << " scaling=" << hypersim::to_string(c.scaling)
              << " startup_delay=" << hypersim::fmt_double(c.startup_delay)
              << " mean_delta=" << hypersim::fmt_double(c.mean_delta)
              << " seeds=" << c.seeds << (c.flagged ? " [below baseline]" : "")
              << "\n";
  }
  if (!out_flag.empty() || std::getenv("HYPERSIM_OUT")) {
    fs::path dir = resolve_out(out_flag);
    write_file(dir / "compare_long.csv", result.long_csv);
    std::cout << "wrote " << (dir / "compare_long.csv").string() << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"deadline-aware hyperparameter search simulator"};
  app.require_subcommand(1);

  std::string run_config, run_out;
  std::optional<std::uint64_t> run_seed;
  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("--config", run_config, "experiment config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", run_out,
                  "output directory (default $HYPERSIM_OUT or .)");
  run->add_option("--seed", run_seed, "override the config seed");

  std::string sweep_preset, sweep_spec, sweep_out;
  std::vector<std::uint64_t> sweep_seeds;
  int sweep_workers = 1;
  CLI::App* sweep =
      app.add_subcommand("sweep", "run a multi-seed experiment grid");
  CLI::Option* opt_preset =
      sweep->add_option("--preset", sweep_preset, "preset grid name");
  sweep->add_option("--spec", sweep_spec, "custom sweep spec JSON")
      ->check(CLI::ExistingFile)
      ->excludes(opt_preset);
  sweep->add_option("--out", sweep_out,
                    "output directory (default $HYPERSIM_OUT or .)");
  sweep->add_option("--seeds", sweep_seeds,
                    "seed list (default from spec, else 0..4)");
  sweep->add_option("--workers", sweep_workers, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> compare_files;
  std::string compare_out;
  CLI::App* compare = app.add_subcommand(
      "compare", "compare run-summary CSVs; first file is the baseline");
  compare->add_option("files", compare_files, "summary CSV files")
      ->required()
      ->expected(2, -1)
      ->check(CLI::ExistingFile);
  compare->add_option("--out", compare_out, "write the stacked long CSV here");

  CLI::App* presets =
      app.add_subcommand("presets", "list the preset grid names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_config, run_out, run_seed);
    if (sweep->parsed()) {
      if (sweep_preset.empty() && sweep_spec.empty()) {
        std::cerr << "error: sweep needs --preset or --spec\n";
        return 2;
      }
      return cmd_sweep(sweep_preset, sweep_spec, sweep_out, sweep_seeds,
                       sweep_workers);
    }
    if (compare->parsed()) return cmd_compare(compare_files, compare_out);
    if (presets->parsed()) {
      for (const std::string& n : hypersim::preset_names())
        std::cout << n << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
