// Copyright 2026 The exprmark Authors
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

// Reference formulas written independently of the library code.
namespace exprmark::testing {

// Stateful SplitMix64 as published by Steele, Lea and Flood.
class ReferenceSplitMix64 {
 public:
  explicit ReferenceSplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Speaking time of `words` words at `wpm` with a rate change of `rate_pct`.
inline double speech_ms(double words, double wpm, double rate_pct = 0.0) {
  return words * 60000.0 / wpm / (1.0 + rate_pct / 100.0);
}

// First output of SplitMix64 seeded with 0.
inline constexpr std::uint64_t kSplitMixZeroFirst = 0xE220A8397B1DCDAFULL;

// Seed whose first thinking-filler draw from the bundled library is the
// first entry ("umm..."), found by evaluating the generator offline.
inline constexpr std::uint64_t kUmmSeed = 2;

}  // namespace exprmark::testing
