// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/sweep.hpp"

#include "hypersim/config_io.hpp"
#include "hypersim/csv.hpp"

#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace hypersim {

namespace {

using json = nlohmann::json;

ExperimentConfig base_defaults() {
  ExperimentConfig c;
  c.min_epochs = 1;
  c.max_epochs = 500;
  c.eta = 3;
  c.base_step_time = 0.1;
  c.startup_delay = 0.0;
  c.scaling = ScalingKind::Linear;
  return c;
}

std::string fraction_label(double f) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fraction_%.2f", f);
  return buf;
}

SweepSpec speculative_preset() {
  SweepSpec s;
  s.name = "speculative";
  for (const char* variant : {"hypersched", "hypersched_nospec"}) {
    for (int atoms : {4, 8, 16, 32}) {
      for (double deadline : {15.0, 30.0, 60.0, 120.0}) {
        ExperimentConfig c = base_defaults();
        c.scheduler = SchedulerKind::HyperSched;
        c.speculative = std::string(variant) == "hypersched";
        c.atoms = atoms;
        c.deadline = deadline;
        s.cells.push_back({variant, c});
      }
    }
  }
  return s;
}

SweepSpec entrance_preset() {
  SweepSpec s;
  s.name = "entrance";
  auto add = [&s](const std::string& variant, const ExperimentConfig& base) {
    for (int atoms : {4, 16}) {
      for (double deadline : {10.0, 20.0, 30.0}) {
        ExperimentConfig c = base;
        c.atoms = atoms;
        c.deadline = deadline;
        s.cells.push_back({variant, c});
      }
    }
  };
  ExperimentConfig hs = base_defaults();
  hs.scheduler = SchedulerKind::HyperSched;
  add("hypersched", hs);
  for (double f : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    ExperimentConfig c = base_defaults();
    c.scheduler = SchedulerKind::FixedFraction;
    c.exploration_fraction = f;
    add(fraction_label(f), c);
  }
  return s;
}

SweepSpec dra_preset() {
  SweepSpec s;
  s.name = "dra";
  for (const char* variant : {"hypersched", "hypersched_noresize"}) {
    for (ScalingKind scaling :
         {ScalingKind::Linear, ScalingKind::Sqrt, ScalingKind::None}) {
      for (int atoms : {2, 4, 8, 16}) {
        ExperimentConfig c = base_defaults();
        c.scheduler = SchedulerKind::HyperSched;
        c.resize = std::string(variant) == "hypersched";
        c.scaling = scaling;
        c.atoms = atoms;
        c.deadline = 10.0;
        s.cells.push_back({variant, c});
      }
    }
  }
  return s;
}

SweepSpec profiling_preset() {
  SweepSpec s;
  s.name = "profiling";
  for (const char* variant : {"hypersched_profile", "hypersched_noprofile"}) {
    for (double f : {0.01, 0.05, 0.10}) {
      ExperimentConfig c = base_defaults();
      c.scheduler = SchedulerKind::HyperSched;
      c.profile = std::string(variant) == "hypersched_profile";
      c.scaling = ScalingKind::Sqrt;
      c.atoms = 16;
      c.deadline = 10.0;
      c.startup_delay = f * c.deadline;
      s.cells.push_back({variant, c});
    }
  }
  return s;
}

SweepSpec sensitivity_preset() {
  SweepSpec s;
  s.name = "sensitivity";
  for (const char* variant : {"hypersched", "hypersched_noresize"}) {
    for (ScalingKind scaling :
         {ScalingKind::Linear, ScalingKind::Sqrt, ScalingKind::None}) {
      for (double f : {0.01, 0.05, 0.10, 0.20}) {
        ExperimentConfig c = base_defaults();
        c.scheduler = SchedulerKind::HyperSched;
        c.resize = std::string(variant) == "hypersched";
        c.scaling = scaling;
        c.atoms = 4;
        c.deadline = 20.0;
        c.startup_delay = f * c.deadline;
        s.cells.push_back({variant, c});
      }
    }
  }
  return s;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
            c == '-')
               ? c
               : '_';
  }
  return out;
}

} // namespace

std::vector<std::string> preset_names() {
  return {"speculative", "entrance", "dra", "profiling", "sensitivity"};
}

SweepSpec preset_sweep(const std::string& name) {
  if (name == "speculative") return speculative_preset();
  if (name == "entrance") return entrance_preset();
  if (name == "dra") return dra_preset();
  if (name == "profiling") return profiling_preset();
  if (name == "sensitivity") return sensitivity_preset();
  std::string known;
  for (const std::string& n : preset_names()) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep spec: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("sweep spec must be a JSON object");

  SweepSpec spec;
  spec.name = j.value("name", std::string("custom"));
  json base = j.value("base", json::object());
  json axes = j.value("axes", json::object());
  json variants = j.value("variants", json::array());
  if (j.contains("seeds")) {
    for (const auto& s : j.at("seeds"))
      spec.seeds.push_back(s.get<std::uint64_t>());
  }

  static const std::vector<std::string> axis_order = {
      "scaling", "atoms", "deadline", "startup_delay",
      "startup_delay_fraction", "exploration_fraction"};
  for (auto it = axes.begin(); it != axes.end(); ++it) {
    bool ok = false;
    for (const std::string& a : axis_order) ok = ok || a == it.key();
    if (!ok) throw ConfigError("unknown sweep axis '" + it.key() + "'");
  }

  // Cartesian product of the provided axes, in fixed axis order.
  std::vector<json> combos = {json::object()};
  for (const std::string& axis : axis_order) {
    if (!axes.contains(axis)) continue;
    std::vector<json> expanded;
    for (const json& combo : combos) {
      for (const json& value : axes.at(axis)) {
        json next = combo;
        next[axis] = value;
        expanded.push_back(next);
      }
    }
    combos = std::move(expanded);
  }

  if (variants.empty()) {
    variants = json::array({json{{"label", "base"}, {"overrides", json::object()}}});
  }

  for (const json& variant : variants) {
    std::string label = variant.value("label", std::string("variant"));
    json overrides = variant.value("overrides", json::object());
    for (const json& combo : combos) {
      json merged = base;
      for (auto it = overrides.begin(); it != overrides.end(); ++it)
        merged[it.key()] = it.value();
      double fraction = -1.0;
      for (auto it = combo.begin(); it != combo.end(); ++it) {
        if (it.key() == "startup_delay_fraction") {
          fraction = it.value().get<double>();
        } else {
          merged[it.key()] = it.value();
        }
      }
      if (fraction >= 0.0) {
        double deadline = merged.value("deadline", 15.0);
        merged["startup_delay"] = fraction * deadline;
      }
      ExperimentConfig cfg = config_from_json_text(merged.dump());
      spec.cells.push_back({label, cfg});
    }
  }
  if (spec.cells.empty()) throw ConfigError("sweep spec has no cells");
  return spec;
}

RunRow row_from_result(const std::string& label, const ExperimentResult& r) {
  RunRow row;
  row.label = label;
  row.seed = r.config.seed;
  row.atoms = r.config.atoms;
  row.deadline = r.config.deadline;
  row.scaling = r.config.scaling;
  row.startup_delay = r.config.startup_delay;
  row.max_score = r.metrics.max_score;
  row.trial_count = r.metrics.trial_count;
  row.top_trial_iters = r.metrics.top_trial_iters;
  return row;
}

static const char kSummaryHeader[] =
    "scheduler,seed,N,T,scaling,startup_delay,max_score,trial_count,"
    "top_trial_iters";

std::string summary_csv(const std::vector<RunRow>& rows) {
  std::string out = kSummaryHeader;
  out += '\n';
  for (const RunRow& r : rows) {
    out += r.label;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.atoms);
    out += ',';
    out += fmt_double(r.deadline);
    out += ',';
    out += to_string(r.scaling);
    out += ',';
    out += fmt_double(r.startup_delay);
    out += ',';
    out += fmt_double(r.max_score);
    out += ',';
    out += std::to_string(r.trial_count);
    out += ',';
    out += std::to_string(r.top_trial_iters);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("bad " + what + " value '" + s + "' in summary CSV");
  return v;
}

ScalingKind parse_scaling_cell(const std::string& s) {
  if (s == "linear") return ScalingKind::Linear;
  if (s == "sqrt") return ScalingKind::Sqrt;
  if (s == "none") return ScalingKind::None;
  throw ConfigError("bad scaling value '" + s + "' in summary CSV");
}

} // namespace

std::vector<RunRow> parse_summary_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader)
    throw ConfigError("summary CSV header mismatch");
  std::vector<RunRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 9) throw ConfigError("summary CSV row has wrong arity");
    RunRow r;
    r.label = f[0];
    r.seed = static_cast<std::uint64_t>(std::stoull(f[1]));
    r.atoms = std::stoi(f[2]);
    r.deadline = parse_double(f[3], "deadline");
    r.scaling = parse_scaling_cell(f[4]);
    r.startup_delay = parse_double(f[5], "startup_delay");
    r.max_score = parse_double(f[6], "max_score");
    r.trial_count = std::stoi(f[7]);
    r.top_trial_iters = std::stoll(f[8]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<RunRow> parse_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open summary CSV: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_summary_csv_text(buf.str());
}

SweepOutput run_sweep(const SweepSpec& spec,
                      const std::vector<std::uint64_t>& seeds, int workers) {
  std::vector<std::uint64_t> seed_list = seeds;
  if (seed_list.empty()) seed_list = spec.seeds;
  if (seed_list.empty()) seed_list = {0, 1, 2, 3, 4};

  struct Task {
    std::size_t cell;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    for (std::uint64_t s : seed_list) tasks.push_back({c, s});
  }

  SweepOutput out;
  out.runs.resize(tasks.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto work = [&]() {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        const Task& task = tasks[i];
        ExperimentConfig cfg = spec.cells[task.cell].cfg;
        cfg.seed = task.seed;
        ExperimentResult r = run_experiment(cfg);
        out.runs[i] = row_from_result(spec.cells[task.cell].variant, r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  int n = std::max(1, workers);
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Aggregate per cell; population spread (sqrt of the mean squared
  // deviation) rather than the sample estimator.
  std::size_t per_cell = seed_list.size();
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    AggRow agg;
    const ExperimentConfig& cfg = spec.cells[c].cfg;
    agg.variant = spec.cells[c].variant;
    agg.atoms = cfg.atoms;
    agg.deadline = cfg.deadline;
    agg.scaling = cfg.scaling;
    agg.startup_delay = cfg.startup_delay;
    agg.seeds = static_cast<int>(per_cell);
    auto stats = [&](auto get, double& mean, double& spread) {
      double sum = 0.0;
      for (std::size_t s = 0; s < per_cell; ++s)
        sum += get(out.runs[c * per_cell + s]);
      mean = sum / static_cast<double>(per_cell);
      double var = 0.0;
      for (std::size_t s = 0; s < per_cell; ++s) {
        double d = get(out.runs[c * per_cell + s]) - mean;
        var += d * d;
      }
      spread = std::sqrt(var / static_cast<double>(per_cell));
    };
    stats([](const RunRow& r) { return r.max_score; }, agg.mean_score,
          agg.spread_score);
    stats([](const RunRow& r) { return static_cast<double>(r.trial_count); },
          agg.mean_trials, agg.spread_trials);
    stats(
        [](const RunRow& r) { return static_cast<double>(r.top_trial_iters); },
        agg.mean_top_iter, agg.spread_top_iter);
    out.cells.push_back(agg);
  }
  return out;
}

std::string aggregate_csv(const std::vector<AggRow>& cells) {
  std::string out =
      "variant,N,T,scaling,startup_delay,seeds,mean_score,spread_score,"
      "mean_trials,spread_trials,mean_top_iter,spread_top_iter\n";
  for (const AggRow& a : cells) {
    out += a.variant;
    out += ',';
    out += std::to_string(a.atoms);
    out += ',';
    out += fmt_double(a.deadline);
    out += ',';
    out += to_string(a.scaling);
    out += ',';
    out += fmt_double(a.startup_delay);
    out += ',';
    out += std::to_string(a.seeds);
    out += ',';
    out += fmt_double(a.mean_score);
    out += ',';
    out += fmt_double(a.spread_score);
    out += ',';
    out += fmt_double(a.mean_trials);
    out += ',';
    out += fmt_double(a.spread_trials);
    out += ',';
    out += fmt_double(a.mean_top_iter);
    out += ',';
    out += fmt_double(a.spread_top_iter);
    out += '\n';
  }
  return out;
}

void write_sweep_files(const std::string& dir, const SweepSpec& spec,
                       const SweepOutput& out) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream f(fs::path(dir) / (spec.name + ".csv"), std::ios::binary);
    f << aggregate_csv(out.cells);
  }
  // Per-variant run files keep (N, T, seed) keys unique so the files feed
  // straight into `compare`.
  std::vector<std::string> order;
  std::map<std::string, std::vector<RunRow>> by_variant;
  for (const RunRow& r : out.runs) {
    if (!by_variant.count(r.label)) order.push_back(r.label);
    by_variant[r.label].push_back(r);
  }
  for (const std::string& label : order) {
    std::ofstream f(fs::path(dir) /
                        (spec.name + "_runs_" + sanitize(label) + ".csv"),
                    std::ios::binary);
    f << summary_csv(by_variant[label]);
  }
}

CompareResult compare_summaries(const std::vector<std::vector<RunRow>>& inputs,
                                const std::vector<std::string>& labels) {
  if (inputs.size() < 2)
    throw ConfigError("compare needs at least two summary files");

  // (N, T, scaling, startup_delay, seed)
  using Key = std::tuple<int, double, ScalingKind, double, std::uint64_t>;
  std::vector<std::map<Key, const RunRow*>> maps;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::map<Key, const RunRow*> m;
    for (const RunRow& r : inputs[i]) {
      Key k{r.atoms, r.deadline, r.scaling, r.startup_delay, r.seed};
      if (!m.emplace(k, &r).second)
        throw ConfigError("duplicate (N,T,scaling,startup_delay,seed) key in " +
                          labels[i]);
    }
    maps.push_back(std::move(m));
  }
  for (std::size_t i = 1; i < maps.size(); ++i) {
    if (maps[i].size() != maps[0].size())
      throw ConfigError("summary files do not cover the same condition keys");
    for (const auto& [k, row] : maps[0]) {
      if (!maps[i].count(k)) {
        throw ConfigError(
            "key (N=" + std::to_string(std::get<0>(k)) +
            ",T=" + fmt_double(std::get<1>(k)) +
            ",scaling=" + to_string(std::get<2>(k)) +
            ",startup_delay=" + fmt_double(std::get<3>(k)) +
            ",seed=" + std::to_string(std::get<4>(k)) + ") missing from " +
            labels[i]);
      }
    }
  }

  CompareResult result;
  for (std::size_t i = 1; i < maps.size(); ++i) {
    using CellKey = std::tuple<int, double, ScalingKind, double>;
    std::map<CellKey, std::pair<double, int>> cells;
    for (const auto& [k, row] : maps[i]) {
      const RunRow* base = maps[0].at(k);
      auto& cell =
          cells[{row->atoms, row->deadline, row->scaling, row->startup_delay}];
      cell.first += row->max_score - base->max_score;
      cell.second += 1;
    }
    for (const auto& [cell_key, acc] : cells) {
      CompareCell c;
      c.label = labels[i];
      c.atoms = std::get<0>(cell_key);
      c.deadline = std::get<1>(cell_key);
      c.scaling = std::get<2>(cell_key);
      c.startup_delay = std::get<3>(cell_key);
      c.seeds = acc.second;
      c.mean_delta = acc.first / static_cast<double>(acc.second);
      c.flagged = c.mean_delta < 0.0;
      result.cells.push_back(c);
    }
  }

  std::string csv =
      "source,scheduler,seed,N,T,scaling,startup_delay,max_score,trial_count,"
      "top_trial_iters\n";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (const RunRow& r : inputs[i]) {
      csv += labels[i];
      csv += ',';
      csv += r.label;
      csv += ',';
      csv += std::to_string(r.seed);
      csv += ',';
      csv += std::to_string(r.atoms);
      csv += ',';
      csv += fmt_double(r.deadline);
      csv += ',';
      csv += to_string(r.scaling);
      csv += ',';
      csv += fmt_double(r.startup_delay);
      csv += ',';
      csv += fmt_double(r.max_score);
      csv += ',';
      csv += std::to_string(r.trial_count);
      csv += ',';
      csv += std::to_string(r.top_trial_iters);
      csv += '\n';
    }
  }
  result.long_csv = std::move(csv);
  return result;
}

} // namespace hypersim
