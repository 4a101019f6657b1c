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

#include "exprmark/timing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace exprmark {
namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::size_t count_words(std::string_view text) {
  std::size_t words = 0;
  bool in_word = false;
  for (const char c : text) {
    const bool space = is_space(static_cast<unsigned char>(c));
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

TimelineClock::TimelineClock(TimingParams params) : params_(params) {
  if (!params_.valid()) {
    throw std::invalid_argument("base_rate_wpm must be in [60, 400], got " +
                                std::to_string(params_.base_rate_wpm));
  }
}

double TimelineClock::stamp(const MarkupEvent& event) {
  const double start = now_ms();
  if (const auto* text = std::get_if<TextRun>(&event)) {
    const int rate = rate_stack_.empty() ? 0 : rate_stack_.back();
    const int clamped = std::clamp(rate, -kMaxProsodyPercent, kMaxProsodyPercent);
    words_at_rate_[clamped + kMaxProsodyPercent] += count_words(text->text);
  } else if (const auto* pause = std::get_if<Break>(&event)) {
    break_ms_ += pause->duration_ms;
  } else if (const auto* open = std::get_if<ProsodyOpen>(&event)) {
    rate_stack_.push_back(open->rate_pct);
  } else if (std::holds_alternative<ProsodyClose>(event)) {
    if (!rate_stack_.empty()) rate_stack_.pop_back();
  }
  return start;
}

double TimelineClock::now_ms() const {
  double speech = 0.0;
  for (int bucket = 0; bucket < kRateBuckets; ++bucket) {
    const std::uint64_t words = words_at_rate_[bucket];
    if (words == 0) continue;
    const int rate = bucket - kMaxProsodyPercent;
    // words * 60000 / wpm * 100 / (100 + rate), as a single division.
    speech += static_cast<double>(words) * 6'000'000.0 /
              (params_.base_rate_wpm * (100 + rate));
  }
  return speech + static_cast<double>(break_ms_);
}

std::vector<TimelineStamp> estimate_timeline(std::span<const MarkupEvent> events,
                                             TimingParams params) {
  TimelineClock clock(params);
  std::vector<TimelineStamp> out;
  out.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    out.push_back({i, clock.stamp(events[i])});
  }
  return out;
}

}  // namespace exprmark
