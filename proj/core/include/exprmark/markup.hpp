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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace exprmark {

// Value bounds applied by attribute normalization. Out-of-range input is
// clamped with a warning, never rejected.
inline constexpr int kMaxBreakMs = 5000;
inline constexpr int kMaxProsodyPercent = 50;
// Nesting limit for a compiled document. Source text may nest one level less
// so that filler expansion always fits.
inline constexpr int kMaxProsodyDepth = 4;
inline constexpr int kMaxSourceProsodyDepth = kMaxProsodyDepth - 1;
// Longest byte sequence the stream parser will hold back as a possible tag.
inline constexpr std::size_t kMaxTagBytes = 256;

enum class VolumeLevel { XSoft, Soft, Medium, Loud, XLoud };
enum class FillerKind { Thinking, Hesitation, Transition };

inline constexpr VolumeLevel kAllVolumeLevels[] = {
    VolumeLevel::XSoft, VolumeLevel::Soft, VolumeLevel::Medium,
    VolumeLevel::Loud, VolumeLevel::XLoud};
inline constexpr FillerKind kAllFillerKinds[] = {
    FillerKind::Thinking, FillerKind::Hesitation, FillerKind::Transition};

std::string_view to_string(VolumeLevel level);
std::string_view to_string(FillerKind kind);
std::optional<VolumeLevel> parse_volume_level(std::string_view text);
std::optional<FillerKind> parse_filler_kind(std::string_view text);

struct TextRun {
  std::string text;
  friend bool operator==(const TextRun&, const TextRun&) = default;
};

struct Break {
  int duration_ms = 0;
  friend bool operator==(const Break&, const Break&) = default;
};

struct ProsodyOpen {
  int rate_pct = 0;
  VolumeLevel volume = VolumeLevel::Medium;
  int pitch_pct = 0;

  bool is_neutral() const {
    return rate_pct == 0 && volume == VolumeLevel::Medium && pitch_pct == 0;
  }
  friend bool operator==(const ProsodyOpen&, const ProsodyOpen&) = default;
};

struct ProsodyClose {
  friend bool operator==(const ProsodyClose&, const ProsodyClose&) = default;
};

struct Filler {
  FillerKind kind = FillerKind::Thinking;
  friend bool operator==(const Filler&, const Filler&) = default;
};

struct Bookmark {
  std::string mark;
  friend bool operator==(const Bookmark&, const Bookmark&) = default;
};

/// Source bytes the parser could not interpret as a tag. Always paired with a
/// diagnostic; well-formed input never produces one.
struct LiteralPassthrough {
  std::string text;
  friend bool operator==(const LiteralPassthrough&,
                         const LiteralPassthrough&) = default;
};

using MarkupEvent = std::variant<TextRun, Break, ProsodyOpen, ProsodyClose,
                                 Filler, Bookmark, LiteralPassthrough>;

enum class Severity { Warning, Error };
std::string_view to_string(Severity severity);

struct ParseDiagnostic {
  Severity severity = Severity::Warning;
  std::size_t byte_offset = 0;
  std::string code;
  std::string message;
  friend bool operator==(const ParseDiagnostic&,
                         const ParseDiagnostic&) = default;
};

struct TaggedDocument {
  std::vector<MarkupEvent> events;
  std::vector<ParseDiagnostic> diagnostics;
  friend bool operator==(const TaggedDocument&,
                         const TaggedDocument&) = default;
};

bool has_errors(std::span<const ParseDiagnostic> diagnostics);

// Attribute payload domains of the tag language.
enum class AttributeKind {
  Duration,    // break time: "500ms", "1.5s"
  Percent,     // prosody rate / pitch: "-10%", "+3%"
  Volume,      // prosody volume: x-soft .. x-loud
  FillerType,  // filler type: thinking | hesitation | transition
  Mark,        // bookmark mark: identifier
};

using AttributeValue = std::variant<int, VolumeLevel, FillerKind, std::string>;

/// Parses and clamps one attribute payload (quotes already stripped).
///
/// Clamping appends a warning to `diagnostics`; an unparseable payload
/// appends an error and returns nullopt. `byte_offset` is stamped on every
/// diagnostic produced.
std::optional<AttributeValue> normalize_attribute_value(
    std::string_view raw, AttributeKind kind,
    std::vector<ParseDiagnostic>& diagnostics, std::size_t byte_offset = 0);

/// Canonical text form of a normalized value, e.g. 500 -> "500ms" for
/// durations, -10 -> "-10%" for percents. Feeding it back through
/// normalize_attribute_value yields the same value.
std::string format_attribute_value(const AttributeValue& value,
                                   AttributeKind kind);

std::string format_percent(int pct);

bool is_identifier(std::string_view text);

/// Concatenation of TextRun and LiteralPassthrough contents. Unexpanded
/// fillers contribute nothing.
std::string spoken_text(std::span<const MarkupEvent> events);
inline std::string spoken_text(const TaggedDocument& doc) {
  return spoken_text(doc.events);
}

/// Number of Unicode code points in `text`. Invalid bytes count as one each.
std::size_t count_code_points(std::string_view text);

/// Appends `event` to `events`, merging it into a trailing TextRun when both
/// are text. Event streams produced chunk by chunk compare equal to a
/// whole-string parse once concatenated through this function.
void append_event(std::vector<MarkupEvent>& events, MarkupEvent event);
void append_events(std::vector<MarkupEvent>& events,
                   std::span<const MarkupEvent> more);

/// Coalesced copy of `events`.
std::vector<MarkupEvent> coalesce(std::span<const MarkupEvent> events);

/// Short human-readable form for logs and test failure output.
std::string describe(const MarkupEvent& event);

// Tag vocabulary shared by the parser (what it accepts) and the prompt
// builder (what the model is told it may emit).

enum class Modality { Speech, Gesture };

struct AttributeSchema {
  std::string_view name;
  AttributeKind kind;
  bool required;
  std::string_view domain;  // human-readable value domain
};

struct TagSchema {
  std::string_view name;
  Modality modality;
  bool is_container;
  std::vector<AttributeSchema> attributes;
  std::string_view illustration;  // canonical usage example
  std::string_view purpose;

  const AttributeSchema* find_attribute(std::string_view attr) const;
};

const std::vector<TagSchema>& tag_schemas();
const TagSchema* find_tag_schema(std::string_view name);

}  // namespace exprmark
