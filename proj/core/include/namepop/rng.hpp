// Copyright 2026 The namepop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string_view>

namespace namepop {

// SplitMix64 generator (Steele, Lea and Flood 2014). The output sequence is
// fully determined by the seed and identical on every platform; the standard
// <random> distributions give no such guarantee.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound) without modulo bias beyond 1 / 2^64 per draw;
  // bound must be nonzero.
  uint64_t next_below(uint64_t bound) {
    // Lemire's multiply-shift reduction.
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    return static_cast<uint64_t>(m >> 64);
  }

 private:
  uint64_t state_;
};

// Mixes (seed, index) into a seed for an independent stream. Records drawn
// from stream i never depend on how many values stream j consumed.
inline uint64_t derive_stream(uint64_t seed, uint64_t index) {
  SplitMix64 mix(seed ^ (index + 1) * 0xD1B54A32D192ED03ull);
  mix.next();
  return mix.next();
}

// FNV-1a 64-bit hash; stable across platforms, used for content fingerprints
// and seeded record ordering.
inline uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline uint64_t mix64(uint64_t x) {
  SplitMix64 mix(x);
  return mix.next();
}

}  // namespace namepop
