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

#include "exprmark/providers.hpp"

#include <cmath>
#include <thread>

#include "exprmark/stream_parser.hpp"

namespace exprmark {

MockLlm::MockLlm(std::string response, std::size_t chunk_bytes) {
  if (chunk_bytes == 0) chunk_bytes = 1;
  for (std::size_t pos = 0; pos < response.size(); pos += chunk_bytes) {
    chunks_.push_back(response.substr(pos, chunk_bytes));
  }
}

MockLlm::MockLlm(std::vector<std::string> chunks) : chunks_(std::move(chunks)) {}

void MockLlm::stream_completion(const std::string& prompt,
                                const ChunkSink& sink) {
  last_prompt_ = prompt;
  for (std::size_t i = 0; i < chunks_.size(); ++i) {
    if (fail_at_ && *fail_at_ == i) throw ProviderError(fail_message_);
    if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
    if (!sink(chunks_[i])) return;
    if (after_chunk_) after_chunk_(i);
  }
}

SynthesisResult MockTts::synthesize(const std::string& ssml) {
  // The envelope and any unknown markup parse as literal passthrough; only
  // real speech events count toward timing.
  std::vector<MarkupEvent> speech;
  for (auto& event : parse_document(ssml).events) {
    if (!std::holds_alternative<LiteralPassthrough>(event)) {
      speech.push_back(std::move(event));
    }
  }
  SynthesisResult result;
  TimelineClock clock(params_);
  for (const auto& event : speech) {
    const double at = clock.stamp(event);
    if (const auto* mark = std::get_if<Bookmark>(&event)) {
      result.bookmarks.push_back({mark->mark, at});
    }
  }
  result.duration_ms = clock.now_ms();
  const auto ms = static_cast<std::uint32_t>(std::llround(result.duration_ms));
  result.audio = {'M', 'O', 'C', 'K',
                  static_cast<std::uint8_t>(ms & 0xFF),
                  static_cast<std::uint8_t>((ms >> 8) & 0xFF),
                  static_cast<std::uint8_t>((ms >> 16) & 0xFF),
                  static_cast<std::uint8_t>((ms >> 24) & 0xFF)};
  return result;
}

}  // namespace exprmark
