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

#include "exprmark/pipeline.hpp"

#include <chrono>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "exprmark/bounded_queue.hpp"
#include "exprmark/records.hpp"

namespace exprmark {
namespace {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Byte length of a sentence terminator starting at text[pos], or 0.
std::size_t terminator_length(std::string_view text, std::size_t pos) {
  const char c = text[pos];
  if (c == '.' || c == '!' || c == '?') return 1;
  for (std::string_view wide : {"\xE3\x80\x82", "\xEF\xBC\x81", "\xEF\xBC\x9F"}) {
    if (text.substr(pos).starts_with(wide)) return wide.size();
  }
  return 0;
}

std::optional<SplitPoint> sentence_flush_point(
    std::span<const MarkupEvent> pending) {
  int depth = 0;
  for (std::size_t k = 0; k < pending.size(); ++k) {
    const auto& event = pending[k];
    if (std::holds_alternative<ProsodyOpen>(event)) ++depth;
    if (std::holds_alternative<ProsodyClose>(event)) --depth;
    const auto* run = std::get_if<TextRun>(&event);
    if (run == nullptr || depth != 0) continue;
    const std::string_view text = run->text;
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
      const std::size_t len = terminator_length(text, pos);
      if (len == 0) continue;
      const std::size_t after = pos + len;
      if (after < text.size() && is_ascii_space(text[after])) {
        return SplitPoint{k, after + 1};
      }
    }
  }
  return std::nullopt;
}

std::optional<SplitPoint> budget_flush_point(
    std::span<const MarkupEvent> pending, std::size_t budget) {
  if (serialize_body(pending).size() < budget) return std::nullopt;
  std::optional<SplitPoint> best;
  int depth = 0;
  for (std::size_t k = 0; k < pending.size(); ++k) {
    if (k > 0 && depth == 0) best = SplitPoint{k, 0};
    const auto& event = pending[k];
    if (std::holds_alternative<ProsodyOpen>(event)) ++depth;
    if (std::holds_alternative<ProsodyClose>(event)) --depth;
    const auto* run = std::get_if<TextRun>(&event);
    if (run == nullptr || depth != 0) continue;
    for (std::size_t p = 1; p <= run->text.size(); ++p) {
      if (is_ascii_space(run->text[p - 1])) best = SplitPoint{k, p};
    }
  }
  // The tail is a safe cut unless it is text that later chunks may extend.
  if (!pending.empty() && depth == 0 &&
      !std::holds_alternative<TextRun>(pending.back())) {
    best = SplitPoint{pending.size(), 0};
  }
  return best;
}

}  // namespace

std::optional<SplitPoint> find_flush_point(std::span<const MarkupEvent> pending,
                                           const FlushPolicy& policy) {
  if (policy.kind == FlushPolicy::Kind::ByteBudget) {
    return budget_flush_point(pending, policy.byte_budget);
  }
  return sentence_flush_point(pending);
}

std::vector<std::string> SessionConfig::validate() const {
  std::vector<std::string> problems;
  if (!envelope.valid()) {
    problems.emplace_back("envelope needs a voice, a language and 60-400 wpm");
  }
  if (flush_policy.kind == FlushPolicy::Kind::ByteBudget &&
      flush_policy.byte_budget < kMaxTagBytes) {
    problems.push_back("byte budget must be at least " +
                       std::to_string(kMaxTagBytes));
  }
  if (queue_capacity == 0) problems.emplace_back("queue capacity is zero");
  return problems;
}

void ConversationHistory::append(std::string question, std::string response) {
  if (limit_ == 0) return;
  turns_.push_back({std::move(question), std::move(response)});
  while (turns_.size() > limit_) turns_.pop_front();
}

std::string ConversationHistory::render() const {
  if (turns_.empty()) return {};
  std::string out = "\n### Conversation History\n";
  for (const auto& turn : turns_) {
    out += "Learner: " + turn.question + "\n";
    out += "Teacher: " + turn.response + "\n";
  }
  return out;
}

ConversationHistory append_turn(ConversationHistory history,
                                std::string question,
                                std::string response_plain_text) {
  history.append(std::move(question), std::move(response_plain_text));
  return history;
}

SessionSummary run_session(const std::string& question,
                           const ProviderSuite& providers,
                           const SessionResources& resources,
                           const SessionConfig& config,
                           const SegmentSink& sink,
                           const ConversationHistory& history,
                           SelectionState* state) {
  if (auto problems = config.validate(); !problems.empty()) {
    throw std::invalid_argument("invalid session config: " + problems.front());
  }
  if (!providers.llm) throw std::invalid_argument("no LLM provider");
  const auto& content = resources.content;
  auto bundle = build_prompt(content.background, content.speech,
                             content.gesture, question,
                             resources.prompt_template);
  if (!bundle) throw std::invalid_argument(bundle.error_text());

  SessionSummary summary;
  summary.prompt =
      render_prompt(bundle.value(), resources.prompt_template, history.render());

  SelectionState local_state(config.seed);
  SelectionState& selection = state != nullptr ? *state : local_state;
  IncrementalCompiler compiler(resources.fillers, resources.gestures,
                               config.envelope, selection);
  BoundedQueue<std::string> queue(config.queue_capacity);
  std::optional<std::string> provider_error;

  std::thread producer([&] {
    try {
      providers.llm->stream_completion(summary.prompt, [&](std::string_view c) {
        return queue.push(std::string(c));
      });
    } catch (const std::exception& e) {
      provider_error = e.what();
    } catch (...) {
      provider_error = "unknown provider failure";
    }
    queue.close();
  });
  struct Joiner {
    BoundedQueue<std::string>& queue;
    std::thread& thread;
    ~Joiner() {
      queue.close();
      if (thread.joinable()) thread.join();
    }
  } joiner{queue, producer};

  const auto started = std::chrono::steady_clock::now();
  std::vector<MarkupEvent> all_events;
  std::string body;

  const auto emit = [&](CompiledSlice slice) {
    OutputSegment segment;
    segment.segment_index = summary.segment_count;
    segment.ssml_fragment = std::move(slice.body);
    segment.cues = std::move(slice.cues);
    segment.events = std::move(slice.events);
    segment.chunks_consumed = summary.chunks_received;
    if (providers.tts) {
      segment.fired_bookmarks =
          providers.tts
              ->synthesize(wrap_envelope(segment.ssml_fragment, config.envelope))
              .bookmarks;
    }
    segment.elapsed_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    append_events(all_events, segment.events);
    body += segment.ssml_fragment;
    summary.utterance.cues.insert(summary.utterance.cues.end(),
                                  segment.cues.begin(), segment.cues.end());
    ++summary.segment_count;
    if (config.transcript != nullptr) {
      *config.transcript << to_json_line(segment_record(segment)) << '\n';
    }
    if (sink) sink(segment);
  };

  try {
    while (auto chunk = queue.pop()) {
      ++summary.chunks_received;
      compiler.feed(*chunk);
      while (auto split = find_flush_point(compiler.pending(),
                                           config.flush_policy)) {
        emit(compiler.take(*split));
      }
    }
    queue.close();
    producer.join();
    if (provider_error) {
      summary.error = "LLM provider failed: " + *provider_error;
    } else {
      compiler.finish();
      while (auto split = find_flush_point(compiler.pending(),
                                           config.flush_policy)) {
        emit(compiler.take(*split));
      }
      if (!compiler.pending().empty()) emit(compiler.take_all());
    }
  } catch (const ProviderError& e) {
    summary.error = std::string("TTS provider failed: ") + e.what();
  }

  auto& utterance = summary.utterance;
  utterance.events = std::move(all_events);
  utterance.ssml = wrap_envelope(body, config.envelope);
  utterance.plain_text = spoken_text(utterance.events);
  utterance.timeline =
      estimate_timeline(utterance.events, config.envelope.timing());
  utterance.diagnostics = compiler.diagnostics();
  return summary;
}

Session::Session(ProviderSuite providers, SessionResources resources,
                 SessionConfig config)
    : providers_(std::move(providers)),
      resources_(resources),
      config_(std::move(config)),
      history_(config_.history_limit),
      state_(config_.seed) {}

SessionSummary Session::ask(const std::string& question,
                            const SegmentSink& sink) {
  SessionSummary summary = run_session(question, providers_, resources_,
                                       config_, sink, history_, &state_);
  if (!summary.error) history_.append(question, summary.utterance.plain_text);
  return summary;
}

SessionSummary Session::ask_audio(std::span<const std::uint8_t> audio,
                                  const SegmentSink& sink) {
  if (!providers_.stt) throw std::invalid_argument("no STT provider");
  return ask(providers_.stt->transcribe(audio), sink);
}

}  // namespace exprmark
