// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// JSON config loading with strict key checking: unknown keys and fields that
// do not apply to the chosen scheduler are rejected with the field name.

#pragma once

#include "hypersim/core.hpp"

#include <string>

namespace hypersim {

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

} // namespace hypersim
