// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "hypersim/profiler.hpp"

#include <stdexcept>

namespace hypersim {

void RunningMedian::insert(double x) {
  if (lo_.empty() || x <= *lo_.rbegin()) {
    lo_.insert(x);
  } else {
    hi_.insert(x);
  }
  if (lo_.size() > hi_.size() + 1) {
    hi_.insert(lo_.extract(std::prev(lo_.end())));
  } else if (hi_.size() > lo_.size()) {
    lo_.insert(hi_.extract(hi_.begin()));
  }
}

double RunningMedian::median() const {
  if (lo_.empty()) throw std::logic_error("median of empty set");
  return *lo_.rbegin();
}

} // namespace hypersim
