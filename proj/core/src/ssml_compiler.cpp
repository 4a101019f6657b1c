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

#include "exprmark/ssml_compiler.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>

#include "exprmark/utf8.hpp"

namespace exprmark {
namespace {

void escape_text(std::string& out, std::string_view text) {
  const std::string clean = utf8::sanitize_for_xml(text);
  for (const char c : clean) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
}

std::string escape_attribute(std::string_view value) {
  std::string out;
  const std::string clean = utf8::sanitize_for_xml(value);
  for (const char c : clean) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void serialize_event(std::string& out, const MarkupEvent& event) {
  if (const auto* text = std::get_if<TextRun>(&event)) {
    escape_text(out, text->text);
  } else if (const auto* literal = std::get_if<LiteralPassthrough>(&event)) {
    escape_text(out, literal->text);
  } else if (const auto* pause = std::get_if<Break>(&event)) {
    out += "<break time=\"" + std::to_string(pause->duration_ms) + "ms\"/>";
  } else if (const auto* open = std::get_if<ProsodyOpen>(&event)) {
    out += "<prosody";
    if (open->rate_pct != 0 || open->is_neutral()) {
      out += " rate=\"" + format_percent(open->rate_pct) + "\"";
    }
    if (open->volume != VolumeLevel::Medium) {
      out += " volume=\"" + std::string(to_string(open->volume)) + "\"";
    }
    if (open->pitch_pct != 0) {
      out += " pitch=\"" + format_percent(open->pitch_pct) + "\"";
    }
    out += ">";
  } else if (std::holds_alternative<ProsodyClose>(event)) {
    out += "</prosody>";
  } else if (const auto* mark = std::get_if<Bookmark>(&event)) {
    out += "<bookmark mark=\"" + escape_attribute(mark->mark) + "\"/>";
  }
  // Unexpanded Filler events have no SSML form.
}

std::size_t spoken_chars(const MarkupEvent& event) {
  if (const auto* text = std::get_if<TextRun>(&event)) {
    return count_code_points(text->text);
  }
  if (const auto* literal = std::get_if<LiteralPassthrough>(&event)) {
    return count_code_points(literal->text);
  }
  return 0;
}

}  // namespace

void append_filler_rendering(std::vector<MarkupEvent>& out,
                             const FillerEntry& entry) {
  out.emplace_back(ProsodyOpen{entry.render_rate_pct, entry.render_volume, 0});
  out.emplace_back(TextRun{" " + entry.surface});
  out.emplace_back(ProsodyClose{});
  out.emplace_back(Break{entry.trailing_break_ms});
}

TaggedDocument expand_fillers(const TaggedDocument& doc,
                              const FillerLibrary& library,
                              SelectionState& state) {
  TaggedDocument out;
  out.diagnostics = doc.diagnostics;
  out.events.reserve(doc.events.size());
  for (const auto& event : doc.events) {
    if (const auto* filler = std::get_if<Filler>(&event)) {
      append_filler_rendering(out.events,
                              select_filler(library, filler->kind, state));
    } else {
      out.events.push_back(event);
    }
  }
  return out;
}

std::string unknown_mark_message(std::string_view mark) {
  return "bookmark mark \"" + std::string(mark) +
         "\" is not in the gesture library; no gesture cue emitted";
}

GestureResolution resolve_gestures(const TaggedDocument& doc,
                                   const GestureLibrary& library,
                                   SelectionState& state) {
  GestureResolution out;
  std::size_t offset = 0;
  for (const auto& event : doc.events) {
    if (const auto* mark = std::get_if<Bookmark>(&event)) {
      auto selected = select_gesture(library, mark->mark, state);
      if (selected) {
        out.cues.push_back({mark->mark, std::move(selected).value(), offset, 0.0});
      } else {
        out.diagnostics.push_back({Severity::Warning, 0, "unknown-mark",
                                   unknown_mark_message(mark->mark)});
      }
    }
    offset += spoken_chars(event);
  }
  return out;
}

std::string serialize_body(std::span<const MarkupEvent> events) {
  std::string out;
  for (const auto& event : events) serialize_event(out, event);
  return out;
}

std::string wrap_envelope(std::string_view body, const SsmlEnvelope& envelope) {
  std::string out =
      "<speak version=\"1.0\" xmlns=\"http://www.w3.org/2001/10/synthesis\" "
      "xml:lang=\"" +
      escape_attribute(envelope.language_tag) + "\"><voice name=\"" +
      escape_attribute(envelope.voice_name) + "\">";
  out += body;
  out += "</voice></speak>";
  return out;
}

std::string emit_ssml(const TaggedDocument& doc, const SsmlEnvelope& envelope) {
  long depth = 0;
  for (const auto& event : doc.events) {
    if (std::holds_alternative<ProsodyOpen>(event)) ++depth;
    if (std::holds_alternative<ProsodyClose>(event) && --depth < 0) break;
  }
  if (depth != 0) {
    throw std::logic_error("emit_ssml: unbalanced prosody in document");
  }
  return wrap_envelope(serialize_body(doc.events), envelope);
}

CompiledUtterance compile(std::string_view raw, const FillerLibrary& fillers,
                          const GestureLibrary& gestures,
                          const SsmlEnvelope& envelope,
                          SelectionState& state) {
  if (!envelope.valid()) throw std::invalid_argument("invalid SSML envelope");
  const TaggedDocument parsed = parse_document(raw);
  TaggedDocument expanded = expand_fillers(parsed, fillers, state);
  GestureResolution resolution = resolve_gestures(expanded, gestures, state);

  CompiledUtterance out;
  out.ssml = emit_ssml(expanded, envelope);
  out.timeline = estimate_timeline(expanded.events, envelope.timing());
  std::size_t next_cue = 0;
  for (std::size_t i = 0;
       i < expanded.events.size() && next_cue < resolution.cues.size(); ++i) {
    const auto* mark = std::get_if<Bookmark>(&expanded.events[i]);
    if (mark == nullptr) continue;
    // Cues follow bookmark order; unknown marks have no cue.
    if (gestures.resolve(mark->mark)) {
      resolution.cues[next_cue++].est_time_ms = out.timeline[i].start_ms;
    }
  }
  out.cues = std::move(resolution.cues);
  out.plain_text = spoken_text(expanded.events);
  out.diagnostics = std::move(expanded.diagnostics);
  out.diagnostics.insert(out.diagnostics.end(),
                         resolution.diagnostics.begin(),
                         resolution.diagnostics.end());
  out.events = std::move(expanded.events);
  return out;
}

IncrementalCompiler::IncrementalCompiler(const FillerLibrary& fillers,
                                         const GestureLibrary& gestures,
                                         SsmlEnvelope envelope,
                                         SelectionState& state)
    : fillers_(fillers),
      gestures_(gestures),
      envelope_(std::move(envelope)),
      state_(state),
      clock_(envelope_.timing()) {
  if (!envelope_.valid()) throw std::invalid_argument("invalid SSML envelope");
}

void IncrementalCompiler::feed(std::string_view chunk) {
  accept(parser_.feed(chunk));
}

void IncrementalCompiler::finish() {
  if (finished_) return;
  accept(parser_.finish());
  finished_ = true;
}

void IncrementalCompiler::accept(ParseOutput output) {
  for (auto& d : output.diagnostics) parse_diagnostics_.push_back(std::move(d));
  for (auto& event : output.events) {
    if (const auto* filler = std::get_if<Filler>(&event)) {
      std::vector<MarkupEvent> rendering;
      append_filler_rendering(rendering,
                              select_filler(fillers_, filler->kind, state_));
      for (auto& e : rendering) {
        spoken_chars_ += spoken_chars(e);
        append_event(pending_, std::move(e));
      }
      continue;
    }
    if (const auto* mark = std::get_if<Bookmark>(&event)) {
      auto selected = select_gesture(gestures_, mark->mark, state_);
      if (selected) {
        pending_cues_.push_back(
            {pending_.size(),
             {mark->mark, std::move(selected).value(), spoken_chars_, 0.0}});
      } else {
        gesture_diagnostics_.push_back({Severity::Warning, 0, "unknown-mark",
                                        unknown_mark_message(mark->mark)});
      }
    }
    spoken_chars_ += spoken_chars(event);
    append_event(pending_, std::move(event));
  }
}

CompiledSlice IncrementalCompiler::take(SplitPoint split) {
  CompiledSlice slice;
  std::size_t whole = std::min(split.event_index, pending_.size());
  std::optional<MarkupEvent> head;
  if (whole < pending_.size() && split.text_bytes > 0) {
    if (auto* text = std::get_if<TextRun>(&pending_[whole])) {
      if (split.text_bytes >= text->text.size()) {
        ++whole;
      } else {
        head = TextRun{text->text.substr(0, split.text_bytes)};
        text->text.erase(0, split.text_bytes);
      }
    }
  }

  slice.events.assign(std::make_move_iterator(pending_.begin()),
                      std::make_move_iterator(pending_.begin() +
                                              static_cast<std::ptrdiff_t>(whole)));
  pending_.erase(pending_.begin(),
                 pending_.begin() + static_cast<std::ptrdiff_t>(whole));
  if (head) slice.events.push_back(std::move(*head));

  std::size_t cue = 0;
  for (std::size_t i = 0; i < slice.events.size(); ++i) {
    const double at = clock_.stamp(slice.events[i]);
    if (cue < pending_cues_.size() && pending_cues_[cue].event_index == i &&
        i < whole) {
      pending_cues_[cue].cue.est_time_ms = at;
      slice.cues.push_back(std::move(pending_cues_[cue].cue));
      ++cue;
    }
  }
  pending_cues_.erase(pending_cues_.begin(),
                      pending_cues_.begin() + static_cast<std::ptrdiff_t>(cue));
  for (auto& c : pending_cues_) c.event_index -= whole;
  slice.body = serialize_body(slice.events);
  return slice;
}

CompiledSlice IncrementalCompiler::take_all() {
  return take({pending_.size(), 0});
}

std::vector<ParseDiagnostic> IncrementalCompiler::diagnostics() const {
  std::vector<ParseDiagnostic> out = parse_diagnostics_;
  out.insert(out.end(), gesture_diagnostics_.begin(),
             gesture_diagnostics_.end());
  return out;
}

}  // namespace exprmark
