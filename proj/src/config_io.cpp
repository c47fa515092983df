// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/config_io.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace hypersim {

namespace {

using json = nlohmann::json;

SchedulerKind parse_scheduler(const std::string& s) {
  if (s == "asha") return SchedulerKind::Asha;
  if (s == "hypersched") return SchedulerKind::HyperSched;
  if (s == "fixed_fraction") return SchedulerKind::FixedFraction;
  throw ConfigError("unknown scheduler '" + s +
                    "' (expected asha, hypersched or fixed_fraction)");
}

ScalingKind parse_scaling(const std::string& s) {
  if (s == "linear") return ScalingKind::Linear;
  if (s == "sqrt") return ScalingKind::Sqrt;
  if (s == "none") return ScalingKind::None;
  throw ConfigError("unknown scaling '" + s +
                    "' (expected linear, sqrt or none)");
}

EntranceKind parse_entrance(const std::string& s) {
  if (s == "deadline") return EntranceKind::Deadline;
  if (s == "capacity") return EntranceKind::Capacity;
  throw ConfigError("unknown entrance '" + s +
                    "' (expected deadline or capacity)");
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + key + "' has the wrong type");
  }
}

} // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> known = {
      "scheduler", "deadline", "atoms", "min_epochs", "max_epochs",
      "eta", "scaling", "base_step_time", "startup_delay", "cooldown",
      "seed", "exp_scale", "speculative", "resize", "profile",
      "entrance", "exploration_fraction"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key()))
      throw ConfigError("unknown field '" + it.key() + "'");
  }

  ExperimentConfig c;
  if (j.contains("scheduler"))
    c.scheduler = parse_scheduler(get_as<std::string>(j, "scheduler"));
  if (j.contains("deadline")) c.deadline = get_as<double>(j, "deadline");
  if (j.contains("atoms")) c.atoms = get_as<int>(j, "atoms");
  if (j.contains("min_epochs"))
    c.min_epochs = get_as<std::int64_t>(j, "min_epochs");
  if (j.contains("max_epochs"))
    c.max_epochs = get_as<std::int64_t>(j, "max_epochs");
  if (j.contains("eta")) c.eta = get_as<std::int64_t>(j, "eta");
  if (j.contains("scaling"))
    c.scaling = parse_scaling(get_as<std::string>(j, "scaling"));
  if (j.contains("base_step_time"))
    c.base_step_time = get_as<double>(j, "base_step_time");
  if (j.contains("startup_delay"))
    c.startup_delay = get_as<double>(j, "startup_delay");
  if (j.contains("cooldown")) c.cooldown = get_as<std::int64_t>(j, "cooldown");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("exp_scale")) c.exp_scale = get_as<double>(j, "exp_scale");
  if (j.contains("speculative"))
    c.speculative = get_as<bool>(j, "speculative");
  if (j.contains("resize")) c.resize = get_as<bool>(j, "resize");
  if (j.contains("profile")) c.profile = get_as<bool>(j, "profile");
  if (j.contains("entrance"))
    c.entrance = parse_entrance(get_as<std::string>(j, "entrance"));
  if (j.contains("exploration_fraction"))
    c.exploration_fraction = get_as<double>(j, "exploration_fraction");

  // Scheduler-specific fields must not appear for schedulers that ignore
  // them; silent acceptance has burned enough sweep configs to be worth the
  // strictness.
  auto forbid = [&](const char* key, const char* why) {
    if (j.contains(key))
      throw ConfigError(std::string("field '") + key + "' only applies to " +
                        why);
  };
  if (c.scheduler != SchedulerKind::HyperSched) {
    forbid("speculative", "scheduler 'hypersched'");
    forbid("profile", "scheduler 'hypersched'");
    forbid("entrance", "scheduler 'hypersched'");
  }
  if (c.scheduler == SchedulerKind::Asha) {
    forbid("resize", "schedulers 'hypersched' and 'fixed_fraction'");
    forbid("cooldown", "schedulers 'hypersched' and 'fixed_fraction'");
  }
  if (c.scheduler != SchedulerKind::FixedFraction) {
    forbid("exploration_fraction", "scheduler 'fixed_fraction'");
  } else if (!j.contains("exploration_fraction")) {
    throw ConfigError(
        "field 'exploration_fraction' is required for scheduler "
        "'fixed_fraction'");
  }

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

} // namespace hypersim
