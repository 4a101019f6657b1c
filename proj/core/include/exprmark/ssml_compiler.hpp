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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exprmark/libraries.hpp"
#include "exprmark/markup.hpp"
#include "exprmark/stream_parser.hpp"
#include "exprmark/timing.hpp"

namespace exprmark {

/// A gesture to start when playback reaches `char_offset` code points of
/// spoken text.
struct GestureCue {
  std::string mark;
  GestureEntry gesture;
  std::size_t char_offset = 0;
  double est_time_ms = 0.0;
  friend bool operator==(const GestureCue&, const GestureCue&) = default;
};

struct SsmlEnvelope {
  std::string voice_name = "en-US-JennyNeural";
  std::string language_tag = "en-US";
  double base_rate_wpm = kDefaultWordsPerMinute;

  bool valid() const {
    return TimingParams{base_rate_wpm}.valid() && !voice_name.empty() &&
           !language_tag.empty();
  }
  TimingParams timing() const { return {base_rate_wpm}; }
};

struct CompiledUtterance {
  std::string ssml;
  std::vector<MarkupEvent> events;  // filler-expanded document
  std::vector<GestureCue> cues;
  std::string plain_text;
  std::vector<TimelineStamp> timeline;
  std::vector<ParseDiagnostic> diagnostics;
};

/// Appends the rendering of one filler: ProsodyOpen(rate, volume), the
/// surface text with a leading space, ProsodyClose, then the trailing Break.
void append_filler_rendering(std::vector<MarkupEvent>& out,
                             const FillerEntry& entry);

/// Replaces every Filler event in place with its selected rendering.
TaggedDocument expand_fillers(const TaggedDocument& doc,
                              const FillerLibrary& library,
                              SelectionState& state);

struct GestureResolution {
  std::vector<GestureCue> cues;  // est_time_ms left at 0
  std::vector<ParseDiagnostic> diagnostics;
};

std::string unknown_mark_message(std::string_view mark);

/// One cue per Bookmark whose mark resolves; a warning naming the mark for
/// each one that does not. Bookmark events stay in the document.
GestureResolution resolve_gestures(const TaggedDocument& doc,
                                   const GestureLibrary& library,
                                   SelectionState& state);

/// Body-level SSML for `events`. Serialization is per event, so the body of
/// a concatenation is the concatenation of the bodies.
std::string serialize_body(std::span<const MarkupEvent> events);

std::string wrap_envelope(std::string_view body, const SsmlEnvelope& envelope);

/// Full SSML document. Throws std::logic_error on unbalanced prosody, which
/// parser output never has.
std::string emit_ssml(const TaggedDocument& doc, const SsmlEnvelope& envelope);

/// parse -> expand fillers -> resolve gestures -> emit SSML -> timeline.
/// Never fails on any input; problems are reported as diagnostics.
CompiledUtterance compile(std::string_view raw, const FillerLibrary& fillers,
                          const GestureLibrary& gestures,
                          const SsmlEnvelope& envelope, SelectionState& state);

/// Position inside an IncrementalCompiler's pending events: all events
/// before `event_index`, plus the first `text_bytes` of that event when it
/// is a TextRun.
struct SplitPoint {
  std::size_t event_index = 0;
  std::size_t text_bytes = 0;
};

struct CompiledSlice {
  std::vector<MarkupEvent> events;
  std::vector<GestureCue> cues;
  std::string body;
};

/// The streaming counterpart of compile(). Chunks go through the stream
/// parser; fillers are expanded and bookmarks resolved as they arrive, and
/// the result accumulates in a pending list that the caller drains in
/// slices. Draining the whole stream yields exactly the events, cues and
/// diagnostics compile() produces for the concatenated input.
class IncrementalCompiler {
 public:
  IncrementalCompiler(const FillerLibrary& fillers,
                      const GestureLibrary& gestures, SsmlEnvelope envelope,
                      SelectionState& state);

  void feed(std::string_view chunk);
  void finish();
  bool finished() const { return finished_; }

  /// Coalesced events not yet taken.
  const std::vector<MarkupEvent>& pending() const { return pending_; }
  /// Removes and returns the prefix up to `split`, stamping cue times.
  CompiledSlice take(SplitPoint split);
  CompiledSlice take_all();

  /// Parse diagnostics followed by gesture diagnostics, the order compile()
  /// reports them in.
  std::vector<ParseDiagnostic> diagnostics() const;
  const SsmlEnvelope& envelope() const { return envelope_; }

 private:
  struct PendingCue {
    std::size_t event_index;
    GestureCue cue;
  };

  void accept(ParseOutput output);

  const FillerLibrary& fillers_;
  const GestureLibrary& gestures_;
  SsmlEnvelope envelope_;
  SelectionState& state_;
  StreamParser parser_;
  TimelineClock clock_;
  std::vector<MarkupEvent> pending_;
  std::vector<PendingCue> pending_cues_;
  std::size_t spoken_chars_ = 0;
  std::vector<ParseDiagnostic> parse_diagnostics_;
  std::vector<ParseDiagnostic> gesture_diagnostics_;
  bool finished_ = false;
};

}  // namespace exprmark
