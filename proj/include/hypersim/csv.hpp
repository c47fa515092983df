// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>

namespace hypersim {

// Shortest round-trip decimal form; byte-stable across machines for the same
// IEEE double, which keeps CSVs diffable.
std::string fmt_double(double v);

} // namespace hypersim
