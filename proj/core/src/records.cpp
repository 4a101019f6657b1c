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

#include "exprmark/records.hpp"

#include <string>
#include <type_traits>

namespace exprmark {

using nlohmann::json;

json event_record(const MarkupEvent& event) {
  json out = {{"record", "event"}};
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, TextRun>) {
          out["kind"] = "text";
          out["text"] = e.text;
        } else if constexpr (std::is_same_v<T, Break>) {
          out["kind"] = "break";
          out["duration_ms"] = e.duration_ms;
        } else if constexpr (std::is_same_v<T, ProsodyOpen>) {
          out["kind"] = "prosody_open";
          out["rate_pct"] = e.rate_pct;
          out["volume"] = std::string(to_string(e.volume));
          out["pitch_pct"] = e.pitch_pct;
        } else if constexpr (std::is_same_v<T, ProsodyClose>) {
          out["kind"] = "prosody_close";
        } else if constexpr (std::is_same_v<T, Filler>) {
          out["kind"] = "filler";
          out["type"] = std::string(to_string(e.kind));
        } else if constexpr (std::is_same_v<T, Bookmark>) {
          out["kind"] = "bookmark";
          out["mark"] = e.mark;
        } else {
          out["kind"] = "passthrough";
          out["text"] = e.text;
        }
      },
      event);
  return out;
}

json diagnostic_record(const ParseDiagnostic& diagnostic) {
  return {{"record", "diagnostic"},
          {"severity", std::string(to_string(diagnostic.severity))},
          {"byte_offset", diagnostic.byte_offset},
          {"code", diagnostic.code},
          {"message", diagnostic.message}};
}

json cue_record(const GestureCue& cue) {
  return {{"record", "cue"},
          {"mark", cue.mark},
          {"gesture", cue.gesture.id},
          {"category", std::string(to_string(cue.gesture.category))},
          {"clip", cue.gesture.animation_clip},
          {"char_offset", cue.char_offset},
          {"est_time_ms", cue.est_time_ms}};
}

json stamp_record(const TimelineStamp& stamp, const MarkupEvent& event) {
  json out = event_record(event);
  out["record"] = "stamp";
  out["event_index"] = stamp.event_index;
  out["start_ms"] = stamp.start_ms;
  return out;
}

json events_json(std::span<const MarkupEvent> events) {
  json out = json::array();
  for (const auto& event : events) {
    json e = event_record(event);
    e.erase("record");
    out.push_back(std::move(e));
  }
  return out;
}

json segment_record(const OutputSegment& segment) {
  json cues = json::array();
  for (const auto& cue : segment.cues) {
    json c = cue_record(cue);
    c.erase("record");
    cues.push_back(std::move(c));
  }
  json fired = json::array();
  for (const auto& b : segment.fired_bookmarks) {
    fired.push_back({{"mark", b.mark}, {"time_ms", b.time_ms}});
  }
  return {{"record", "segment"},
          {"index", segment.segment_index},
          {"ssml_fragment", segment.ssml_fragment},
          {"cues", std::move(cues)},
          {"events", events_json(segment.events)},
          {"chunks_consumed", segment.chunks_consumed},
          {"elapsed_ms", segment.elapsed_ms},
          {"fired_bookmarks", std::move(fired)}};
}

json summary_record(const SessionSummary& summary) {
  json diagnostics = json::array();
  for (const auto& d : summary.utterance.diagnostics) {
    json r = diagnostic_record(d);
    r.erase("record");
    diagnostics.push_back(std::move(r));
  }
  json out = {{"record", "summary"},
              {"segment_count", summary.segment_count},
              {"chunks_received", summary.chunks_received},
              {"ssml", summary.utterance.ssml},
              {"plain_text", summary.utterance.plain_text},
              {"cue_count", summary.utterance.cues.size()},
              {"diagnostics", std::move(diagnostics)}};
  out["error"] = summary.error ? json(*summary.error) : json(nullptr);
  return out;
}

std::string to_json_line(const json& record) {
  return record.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace exprmark
