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

#include "exprmark/markup.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "exprmark/utf8.hpp"

namespace exprmark {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Parses "[+-]?digits(.digits)?" exactly. Magnitudes beyond the double range
// saturate, which keeps clamping monotone for absurd inputs.
std::optional<double> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::size_t i = 0;
  std::size_t int_digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++int_digits;
  std::size_t frac_digits = 0;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++frac_digits;
    if (frac_digits == 0) return std::nullopt;
  }
  if (int_digits == 0 || i != s.size()) return std::nullopt;

  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec == std::errc::result_out_of_range) {
    value = 1e300;
  } else if (ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return negative ? -value : value;
}

int round_and_clamp(double value, int lo, int hi, bool& clamped) {
  const double rounded = std::round(value);
  if (rounded < lo) {
    clamped = true;
    return lo;
  }
  if (rounded > hi) {
    clamped = true;
    return hi;
  }
  return static_cast<int>(rounded);
}

void push(std::vector<ParseDiagnostic>& diagnostics, Severity severity,
          std::size_t offset, std::string code, std::string message) {
  diagnostics.push_back(
      {severity, offset, std::move(code), std::move(message)});
}

}  // namespace

std::string_view to_string(VolumeLevel level) {
  switch (level) {
    case VolumeLevel::XSoft: return "x-soft";
    case VolumeLevel::Soft: return "soft";
    case VolumeLevel::Medium: return "medium";
    case VolumeLevel::Loud: return "loud";
    case VolumeLevel::XLoud: return "x-loud";
  }
  return "medium";
}

std::string_view to_string(FillerKind kind) {
  switch (kind) {
    case FillerKind::Thinking: return "thinking";
    case FillerKind::Hesitation: return "hesitation";
    case FillerKind::Transition: return "transition";
  }
  return "thinking";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

std::optional<VolumeLevel> parse_volume_level(std::string_view text) {
  for (VolumeLevel level : kAllVolumeLevels) {
    if (to_string(level) == text) return level;
  }
  return std::nullopt;
}

std::optional<FillerKind> parse_filler_kind(std::string_view text) {
  for (FillerKind kind : kAllFillerKinds) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

bool has_errors(std::span<const ParseDiagnostic> diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const ParseDiagnostic& d) {
                       return d.severity == Severity::Error;
                     });
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  const auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
  };
  if (!alpha(text.front())) return false;
  return std::all_of(text.begin() + 1, text.end(), [&](char c) {
    return alpha(c) || is_digit(c) || c == '_' || c == '-';
  });
}

std::optional<AttributeValue> normalize_attribute_value(
    std::string_view raw, AttributeKind kind,
    std::vector<ParseDiagnostic>& diagnostics, std::size_t byte_offset) {
  const std::string_view value = trim(raw);
  switch (kind) {
    case AttributeKind::Duration: {
      double scale = 1.0;
      std::string_view number;
      if (value.ends_with("ms")) {
        number = value.substr(0, value.size() - 2);
      } else if (value.ends_with("s")) {
        number = value.substr(0, value.size() - 1);
        scale = 1000.0;
      }
      const auto parsed = parse_decimal(number);
      if (!parsed) {
        push(diagnostics, Severity::Error, byte_offset, "invalid-duration",
             "cannot parse duration \"" + utf8::sanitize_for_xml(raw) +
                 "\" (expected e.g. \"500ms\")");
        return std::nullopt;
      }
      bool clamped = false;
      const int ms = round_and_clamp(*parsed * scale, 0, kMaxBreakMs, clamped);
      if (clamped) {
        push(diagnostics, Severity::Warning, byte_offset, "value-clamped",
             "duration \"" + utf8::sanitize_for_xml(raw) + "\" clamped to " +
                 std::to_string(ms) + "ms");
      }
      return ms;
    }
    case AttributeKind::Percent: {
      const auto parsed = value.ends_with("%")
                              ? parse_decimal(value.substr(0, value.size() - 1))
                              : std::nullopt;
      if (!parsed) {
        push(diagnostics, Severity::Error, byte_offset, "invalid-percent",
             "cannot parse percentage \"" + utf8::sanitize_for_xml(raw) +
                 "\" (expected e.g. \"-10%\")");
        return std::nullopt;
      }
      bool clamped = false;
      const int pct = round_and_clamp(*parsed, -kMaxProsodyPercent,
                                      kMaxProsodyPercent, clamped);
      if (clamped) {
        push(diagnostics, Severity::Warning, byte_offset, "value-clamped",
             "percentage \"" + utf8::sanitize_for_xml(raw) + "\" clamped to " +
                 format_percent(pct));
      }
      return pct;
    }
    case AttributeKind::Volume: {
      if (auto level = parse_volume_level(value)) return *level;
      push(diagnostics, Severity::Error, byte_offset, "invalid-volume",
           "unknown volume level \"" + utf8::sanitize_for_xml(raw) + "\"");
      return std::nullopt;
    }
    case AttributeKind::FillerType: {
      if (auto filler = parse_filler_kind(value)) return *filler;
      push(diagnostics, Severity::Error, byte_offset, "invalid-filler-type",
           "unknown filler type \"" + utf8::sanitize_for_xml(raw) + "\"");
      return std::nullopt;
    }
    case AttributeKind::Mark: {
      if (is_identifier(value)) return std::string(value);
      push(diagnostics, Severity::Error, byte_offset, "invalid-mark",
           "bookmark mark \"" + utf8::sanitize_for_xml(raw) + "\" is not an identifier");
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string format_percent(int pct) {
  return (pct < 0 ? "" : "+") + std::to_string(pct) + "%";
}

std::string format_attribute_value(const AttributeValue& value,
                                   AttributeKind kind) {
  switch (kind) {
    case AttributeKind::Duration:
      return std::to_string(std::get<int>(value)) + "ms";
    case AttributeKind::Percent:
      return format_percent(std::get<int>(value));
    case AttributeKind::Volume:
      return std::string(to_string(std::get<VolumeLevel>(value)));
    case AttributeKind::FillerType:
      return std::string(to_string(std::get<FillerKind>(value)));
    case AttributeKind::Mark:
      return std::get<std::string>(value);
  }
  return {};
}

std::string spoken_text(std::span<const MarkupEvent> events) {
  std::string out;
  for (const auto& event : events) {
    if (const auto* text = std::get_if<TextRun>(&event)) {
      out += text->text;
    } else if (const auto* literal = std::get_if<LiteralPassthrough>(&event)) {
      out += literal->text;
    }
  }
  return out;
}

std::size_t count_code_points(std::string_view text) {
  return utf8::count_code_points(text);
}

void append_event(std::vector<MarkupEvent>& events, MarkupEvent event) {
  if (auto* incoming = std::get_if<TextRun>(&event)) {
    if (incoming->text.empty()) return;
    if (!events.empty()) {
      if (auto* last = std::get_if<TextRun>(&events.back())) {
        last->text += incoming->text;
        return;
      }
    }
  }
  events.push_back(std::move(event));
}

void append_events(std::vector<MarkupEvent>& events,
                   std::span<const MarkupEvent> more) {
  for (const auto& event : more) append_event(events, event);
}

std::vector<MarkupEvent> coalesce(std::span<const MarkupEvent> events) {
  std::vector<MarkupEvent> out;
  out.reserve(events.size());
  append_events(out, events);
  return out;
}

std::string describe(const MarkupEvent& event) {
  struct Visitor {
    std::string operator()(const TextRun& e) const {
      return "Text(\"" + e.text + "\")";
    }
    std::string operator()(const Break& e) const {
      return "Break(" + std::to_string(e.duration_ms) + "ms)";
    }
    std::string operator()(const ProsodyOpen& e) const {
      return "ProsodyOpen(rate=" + format_percent(e.rate_pct) +
             ", volume=" + std::string(to_string(e.volume)) +
             ", pitch=" + format_percent(e.pitch_pct) + ")";
    }
    std::string operator()(const ProsodyClose&) const {
      return "ProsodyClose";
    }
    std::string operator()(const Filler& e) const {
      return "Filler(" + std::string(to_string(e.kind)) + ")";
    }
    std::string operator()(const Bookmark& e) const {
      return "Bookmark(\"" + e.mark + "\")";
    }
    std::string operator()(const LiteralPassthrough& e) const {
      return "Literal(\"" + e.text + "\")";
    }
  };
  return std::visit(Visitor{}, event);
}

const AttributeSchema* TagSchema::find_attribute(std::string_view attr) const {
  for (const auto& a : attributes) {
    if (a.name == attr) return &a;
  }
  return nullptr;
}

const std::vector<TagSchema>& tag_schemas() {
  static const std::vector<TagSchema> schemas = {
      {"break",
       Modality::Speech,
       false,
       {{"time", AttributeKind::Duration, true,
         "pause length, 0 to 5000 milliseconds, written like \"500ms\""}},
       R"(<break time="500ms">)",
       "pause tag: inserts a silent pause"},
      {"prosody",
       Modality::Speech,
       true,
       {{"rate", AttributeKind::Percent, false,
         "speech rate change, -50% to +50%, written like \"-10%\""},
        {"volume", AttributeKind::Volume, false,
         "one of x-soft, soft, medium, loud, x-loud"},
        {"pitch", AttributeKind::Percent, false,
         "pitch change, -50% to +50%, written like \"+3%\""}},
       R"(<prosody rate="-10%" volume="medium" pitch="+3%">key phrase</prosody>)",
       "speech rate and tone tag: wraps the words it changes and must be "
       "closed with </prosody>"},
      {"filler",
       Modality::Speech,
       false,
       {{"type", AttributeKind::FillerType, true,
         "one of thinking, hesitation, transition"}},
       R"(<filler type="thinking">)",
       "filler word tag: inserts a filler word from the filler word library"},
      {"bookmark",
       Modality::Gesture,
       false,
       {{"mark", AttributeKind::Mark, true,
         "a gesture mark from the gesture library"}},
       R"(<bookmark mark="pointImportant">)",
       "gesture tag: starts the gesture mapped to the mark at this point of "
       "the speech"},
  };
  return schemas;
}

const TagSchema* find_tag_schema(std::string_view name) {
  for (const auto& schema : tag_schemas()) {
    if (schema.name == name) return &schema;
  }
  return nullptr;
}

}  // namespace exprmark
