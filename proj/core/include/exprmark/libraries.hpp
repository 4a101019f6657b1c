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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exprmark/markup.hpp"
#include "exprmark/result.hpp"

namespace exprmark {

// Rendering applied to a filler when its configuration leaves the field out.
inline constexpr int kDefaultFillerRatePct = -50;
inline constexpr VolumeLevel kDefaultFillerVolume = VolumeLevel::Loud;
inline constexpr int kDefaultFillerBreakMs = 1000;

struct FillerEntry {
  FillerKind kind = FillerKind::Thinking;
  std::string surface;
  int render_rate_pct = kDefaultFillerRatePct;
  VolumeLevel render_volume = kDefaultFillerVolume;
  int trailing_break_ms = kDefaultFillerBreakMs;
  friend bool operator==(const FillerEntry&, const FillerEntry&) = default;
};

class FillerLibrary {
 public:
  /// Validates `entries`: surfaces non-empty, render values inside the
  /// markup clamp bounds, every FillerKind covered.
  static Result<FillerLibrary> from_entries(std::vector<FillerEntry> entries);

  const std::vector<FillerEntry>& entries() const { return entries_; }
  std::vector<const FillerEntry*> entries_of(FillerKind kind) const;

 private:
  FillerLibrary() = default;
  std::vector<FillerEntry> entries_;
};

enum class GestureCategory { Thinking, Emphasizing, Summarizing };
inline constexpr GestureCategory kAllGestureCategories[] = {
    GestureCategory::Thinking, GestureCategory::Emphasizing,
    GestureCategory::Summarizing};

std::string_view to_string(GestureCategory category);
std::optional<GestureCategory> parse_gesture_category(std::string_view text);

struct GestureEntry {
  std::string id;
  GestureCategory category = GestureCategory::Thinking;
  std::string animation_clip;  // opaque to this library
  friend bool operator==(const GestureEntry&, const GestureEntry&) = default;
};

class GestureLibrary {
 public:
  /// Validates ids (unique, non-empty), clips, mark identifiers, and that
  /// every category has at least one entry.
  static Result<GestureLibrary> from_entries(
      std::vector<GestureEntry> entries,
      std::map<std::string, GestureCategory> marks);

  const std::vector<GestureEntry>& entries() const { return entries_; }
  const std::map<std::string, GestureCategory>& marks() const {
    return marks_;
  }
  std::vector<const GestureEntry*> entries_of(GestureCategory category) const;
  std::optional<GestureCategory> resolve(std::string_view mark) const;
  const GestureEntry* find(std::string_view id) const;

 private:
  GestureLibrary() = default;
  std::vector<GestureEntry> entries_;
  std::map<std::string, GestureCategory> marks_;
};

// Configuration documents are JSON objects with top-level "fillers",
// "gestures" and "marks" keys; each loader reads only the keys it needs.
Result<FillerLibrary> load_filler_library(std::string_view json_text);
Result<GestureLibrary> load_gesture_library(std::string_view json_text);
Result<FillerLibrary> load_filler_library_file(
    const std::filesystem::path& path);
Result<GestureLibrary> load_gesture_library_file(
    const std::filesystem::path& path);

/// Output `index` of the SplitMix64 sequence started from `stream_seed`:
/// mix(stream_seed + (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t splitmix64_at(std::uint64_t stream_seed, std::uint64_t index);

/// Uniform integer in [0, bound) drawn from a SplitMix64 stream by rejection
/// (draws below 2^64 mod bound are discarded). Advances `position` by the
/// number of draws consumed.
std::uint64_t uniform_below(std::uint64_t stream_seed, std::uint64_t& position,
                            std::uint64_t bound);

/// Seeded, reproducible selection state for one session.
///
/// Fillers and gestures draw from separate streams (the gesture stream seed
/// is seed ^ kGestureStreamSalt), so interleaving filler and gesture
/// selections in a different order does not change either sequence.
class SelectionState {
 public:
  static constexpr std::uint64_t kGestureStreamSalt = 0x6A09E667F3BCC909ULL;

  explicit SelectionState(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t filler_position() const { return filler_position_; }
  std::uint64_t gesture_position() const { return gesture_position_; }
  const std::optional<std::string>& last_selected(
      GestureCategory category) const {
    return last_selected_[static_cast<std::size_t>(category)];
  }

  friend bool operator==(const SelectionState&,
                         const SelectionState&) = default;

 private:
  friend const FillerEntry& select_filler(const FillerLibrary&, FillerKind,
                                          SelectionState&);
  friend Result<GestureEntry> select_gesture(const GestureLibrary&,
                                             std::string_view,
                                             SelectionState&);

  std::uint64_t seed_;
  std::uint64_t filler_position_ = 0;
  std::uint64_t gesture_position_ = 0;
  std::array<std::optional<std::string>, 3> last_selected_;
};

/// Uniform choice among the library's entries of `kind`.
const FillerEntry& select_filler(const FillerLibrary& library, FillerKind kind,
                                 SelectionState& state);

/// Resolves `mark` to its category and picks a variant uniformly, excluding
/// the category's previous pick whenever it has two or more variants.
/// Unknown marks fail with a message naming the mark.
Result<GestureEntry> select_gesture(const GestureLibrary& library,
                                    std::string_view mark,
                                    SelectionState& state);

}  // namespace exprmark
