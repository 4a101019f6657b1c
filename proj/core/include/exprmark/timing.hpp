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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "exprmark/markup.hpp"

namespace exprmark {

inline constexpr double kDefaultWordsPerMinute = 150.0;
inline constexpr double kMinWordsPerMinute = 60.0;
inline constexpr double kMaxWordsPerMinute = 400.0;

struct TimingParams {
  double base_rate_wpm = kDefaultWordsPerMinute;

  bool valid() const {
    return base_rate_wpm >= kMinWordsPerMinute &&
           base_rate_wpm <= kMaxWordsPerMinute;
  }
};

struct TimelineStamp {
  std::size_t event_index = 0;
  double start_ms = 0.0;
  friend bool operator==(const TimelineStamp&, const TimelineStamp&) = default;
};

/// Whitespace-delimited tokens in `text`.
std::size_t count_words(std::string_view text);

/// Running playback clock over an event stream.
///
/// A text run of W words under active rate r (innermost prosody, percent)
/// lasts W * 60000 / wpm / (1 + r/100) ms; a break lasts its duration;
/// everything else takes no time. Word totals are kept per rate and the clock
/// is evaluated from those totals, so splitting a run at a word boundary
/// never changes any later reading.
class TimelineClock {
 public:
  /// Throws std::invalid_argument when params are out of range.
  explicit TimelineClock(TimingParams params = {});

  /// Time at which `event` starts; then advances past it.
  double stamp(const MarkupEvent& event);
  double now_ms() const;

 private:
  static constexpr int kRateBuckets = 2 * kMaxProsodyPercent + 1;

  TimingParams params_;
  std::int64_t break_ms_ = 0;
  std::array<std::uint64_t, kRateBuckets> words_at_rate_{};
  std::vector<int> rate_stack_;
};

/// Start time of every event, in order. `events` should be filler-expanded
/// and prosody-balanced.
std::vector<TimelineStamp> estimate_timeline(std::span<const MarkupEvent> events,
                                             TimingParams params = {});

}  // namespace exprmark
