// Copyright 2026 the hypersim authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Named, deterministic random streams. A root seed is split by stream name so
// adding a new stream never perturbs draws on existing ones. The engine is
// std::mt19937_64 (bit-exact everywhere); the variate transforms are done by
// hand because the standard library distributions are implementation-defined
// and would break byte-identical traces across toolchains.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace hypersim {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace detail

class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::string_view name)
      : engine_(detail::splitmix64(root_seed ^ detail::fnv1a64(name))) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Exponential with mean `scale` via inverse CDF; log1p keeps the tail exact.
  double exponential(double scale) {
    return -scale * std::log1p(-uniform01());
  }

 private:
  std::mt19937_64 engine_;
};

} // namespace hypersim
