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
#include <string>
#include <string_view>
#include <vector>

#include "exprmark/providers.hpp"
#include "exprmark/result.hpp"

namespace exprmark {

inline constexpr const char* kLlmEndpointVar = "EXPRMARK_LLM_ENDPOINT";
inline constexpr const char* kLlmModelVar = "EXPRMARK_LLM_MODEL";
inline constexpr const char* kLlmApiKeyVar = "EXPRMARK_LLM_API_KEY";

struct EndpointParts {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

/// Splits an http(s) URL into the origin and request path.
Result<EndpointParts> split_endpoint(std::string_view url);

struct HttpLlmConfig {
  std::string endpoint;  // full URL of a chat-completions style endpoint
  std::string model;
  std::string api_key;
  std::chrono::seconds timeout{120};

  /// Reads the three EXPRMARK_LLM_* variables; errors name each one missing.
  static Result<HttpLlmConfig> from_environment();
};

/// Incremental decoder for a server-sent-events completion stream. Each
/// `data:` line holds a JSON object whose choices[0].delta.content is the
/// next piece of text; `data: [DONE]` ends the stream.
class SseDecoder {
 public:
  /// Returns the text deltas completed by `bytes`. Throws ProviderError on a
  /// data line that is not valid JSON.
  std::vector<std::string> feed(std::string_view bytes);
  bool done() const { return done_; }

 private:
  void line(std::string_view text, std::vector<std::string>& out);

  std::string buffer_;
  bool done_ = false;
};

/// Streaming client for OpenAI-compatible chat completion endpoints.
class HttpLlm : public LlmProvider {
 public:
  explicit HttpLlm(HttpLlmConfig config);

  void stream_completion(const std::string& prompt,
                         const ChunkSink& sink) override;

  static bool tls_supported();

 private:
  HttpLlmConfig config_;
  EndpointParts parts_;
};

}  // namespace exprmark
