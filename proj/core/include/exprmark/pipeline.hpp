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
#include <deque>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exprmark/libraries.hpp"
#include "exprmark/prompt_builder.hpp"
#include "exprmark/providers.hpp"
#include "exprmark/ssml_compiler.hpp"

namespace exprmark {

/// When buffered output may be cut into a standalone SSML fragment. Cuts
/// only ever happen outside prosody elements and on word boundaries.
struct FlushPolicy {
  enum class Kind { SentenceBoundary, ByteBudget };

  Kind kind = Kind::SentenceBoundary;
  std::size_t byte_budget = 0;

  static FlushPolicy sentence() { return {}; }
  static FlushPolicy bytes(std::size_t budget) {
    return {Kind::ByteBudget, budget};
  }
};

/// Where the next segment may end, or nullopt when none is ready. With the
/// sentence policy that is just past the whitespace following the first
/// `.`, `!`, `?`, `。`, `！` or `？` outside tags and prosody; with a byte
/// budget it is the last safe cut once the serialized backlog reaches the
/// budget.
std::optional<SplitPoint> find_flush_point(std::span<const MarkupEvent> pending,
                                           const FlushPolicy& policy);

struct SessionConfig {
  std::uint64_t seed = 0;
  SsmlEnvelope envelope;
  FlushPolicy flush_policy;
  std::size_t history_limit = 10;
  std::size_t queue_capacity = 16;  // chunks in flight between stages
  std::ostream* transcript = nullptr;  // one JSON record per segment

  /// Empty when valid, otherwise the problems found.
  std::vector<std::string> validate() const;
};

struct OutputSegment {
  std::size_t segment_index = 0;
  std::string ssml_fragment;
  std::vector<MarkupEvent> events;
  std::vector<GestureCue> cues;  // offsets relative to the whole response
  std::size_t chunks_consumed = 0;  // model chunks read when this was cut
  double elapsed_ms = 0.0;  // wall time since the session started
  std::vector<FiredBookmark> fired_bookmarks;  // from the TTS provider
};

struct SessionSummary {
  std::string prompt;
  CompiledUtterance utterance;
  std::size_t segment_count = 0;
  std::size_t chunks_received = 0;
  std::optional<std::string> error;
};

using SegmentSink = std::function<void(const OutputSegment&)>;

struct Turn {
  std::string question;
  std::string response;
  friend bool operator==(const Turn&, const Turn&) = default;
};

/// The most recent question/answer pairs, oldest first.
class ConversationHistory {
 public:
  explicit ConversationHistory(std::size_t limit = 10) : limit_(limit) {}

  void append(std::string question, std::string response);
  const std::deque<Turn>& turns() const { return turns_; }
  std::size_t size() const { return turns_.size(); }
  std::size_t limit() const { return limit_; }

  /// Prompt section placed after the background; empty for no history.
  std::string render() const;

 private:
  std::size_t limit_;
  std::deque<Turn> turns_;
};

ConversationHistory append_turn(ConversationHistory history,
                                std::string question,
                                std::string response_plain_text);

struct SessionResources {
  const FillerLibrary& fillers;
  const GestureLibrary& gestures;
  const PromptContent& content;
  const PromptTemplate& prompt_template;
};

/// One question through the whole chain: prompt construction, streamed
/// completion, incremental parse/expand/resolve, and segment flushing.
///
/// The provider runs on its own thread and hands chunks to this thread
/// through a bounded queue; `sink` is called on this thread as each segment
/// is cut. On provider failure the segments already emitted stand, the
/// unfinished tail is dropped, and the summary carries the error. Throws
/// std::invalid_argument for an empty question or invalid config.
SessionSummary run_session(const std::string& question,
                           const ProviderSuite& providers,
                           const SessionResources& resources,
                           const SessionConfig& config,
                           const SegmentSink& sink,
                           const ConversationHistory& history = ConversationHistory(),
                           SelectionState* state = nullptr);

/// Multi-turn wrapper: keeps history and selection state across questions.
class Session {
 public:
  Session(ProviderSuite providers, SessionResources resources,
          SessionConfig config);

  SessionSummary ask(const std::string& question, const SegmentSink& sink);
  /// Transcribes with the STT provider, then asks.
  SessionSummary ask_audio(std::span<const std::uint8_t> audio,
                           const SegmentSink& sink);

  const ConversationHistory& history() const { return history_; }
  const SelectionState& selection() const { return state_; }

 private:
  ProviderSuite providers_;
  SessionResources resources_;
  SessionConfig config_;
  ConversationHistory history_;
  SelectionState state_;
};

}  // namespace exprmark
