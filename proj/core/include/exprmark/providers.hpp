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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exprmark/timing.hpp"

namespace exprmark {

class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Receives one chunk of streamed model output; return false to cancel.
using ChunkSink = std::function<bool(std::string_view chunk)>;

/// Streaming text completion: prompt in, ordered chunks out. Implementations
/// call `sink` from the calling thread and throw ProviderError on failure.
class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual void stream_completion(const std::string& prompt,
                                 const ChunkSink& sink) = 0;
};

struct FiredBookmark {
  std::string mark;
  double time_ms = 0.0;
  friend bool operator==(const FiredBookmark&, const FiredBookmark&) = default;
};

struct SynthesisResult {
  std::vector<std::uint8_t> audio;
  std::vector<FiredBookmark> bookmarks;
  double duration_ms = 0.0;
};

class TtsProvider {
 public:
  virtual ~TtsProvider() = default;
  virtual SynthesisResult synthesize(const std::string& ssml) = 0;
};

class SttProvider {
 public:
  virtual ~SttProvider() = default;
  virtual std::string transcribe(std::span<const std::uint8_t> audio) = 0;
};

struct ProviderSuite {
  std::shared_ptr<LlmProvider> llm;
  std::shared_ptr<TtsProvider> tts;  // optional
  std::shared_ptr<SttProvider> stt;  // optional
};

/// Replays a canned response as fixed-size chunks (or an explicit chunk
/// list). Deterministic; optional hooks let tests throttle delivery or
/// inject a failure.
class MockLlm : public LlmProvider {
 public:
  MockLlm(std::string response, std::size_t chunk_bytes);
  explicit MockLlm(std::vector<std::string> chunks);

  /// Called after chunk `index` has been handed to the sink.
  void set_after_chunk(std::function<void(std::size_t index)> hook) {
    after_chunk_ = std::move(hook);
  }
  void set_chunk_delay(std::chrono::milliseconds delay) { delay_ = delay; }
  /// Throws ProviderError instead of delivering chunk `index`.
  void fail_at_chunk(std::size_t index, std::string message) {
    fail_at_ = index;
    fail_message_ = std::move(message);
  }

  void stream_completion(const std::string& prompt,
                         const ChunkSink& sink) override;

  const std::string& last_prompt() const { return last_prompt_; }
  std::size_t chunk_count() const { return chunks_.size(); }

 private:
  std::vector<std::string> chunks_;
  std::function<void(std::size_t)> after_chunk_;
  std::chrono::milliseconds delay_{0};
  std::optional<std::size_t> fail_at_;
  std::string fail_message_;
  std::string last_prompt_;
};

/// "Synthesizes" SSML without audio: bookmark events fire at the timing
/// model's estimates and the audio payload is a small deterministic header.
class MockTts : public TtsProvider {
 public:
  explicit MockTts(TimingParams params = {}) : params_(params) {}
  SynthesisResult synthesize(const std::string& ssml) override;

 private:
  TimingParams params_;
};

class MockStt : public SttProvider {
 public:
  explicit MockStt(std::string transcript) : transcript_(std::move(transcript)) {}
  std::string transcribe(std::span<const std::uint8_t>) override {
    return transcript_;
  }

 private:
  std::string transcript_;
};

}  // namespace exprmark
