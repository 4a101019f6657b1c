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

#include "exprmark/http_llm.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace exprmark {

Result<EndpointParts> split_endpoint(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    return Result<EndpointParts>::failure("endpoint \"" + std::string(url) +
                                          "\" has no scheme");
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    return Result<EndpointParts>::failure("endpoint scheme must be http or https");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  EndpointParts parts;
  parts.origin = std::string(url.substr(0, path_start));
  parts.path = path_start == std::string_view::npos
                   ? "/"
                   : std::string(url.substr(path_start));
  if (parts.origin.size() == scheme_end + 3) {
    return Result<EndpointParts>::failure("endpoint has no host");
  }
  return parts;
}

Result<HttpLlmConfig> HttpLlmConfig::from_environment() {
  std::vector<std::string> errors;
  HttpLlmConfig config;
  const auto read = [&](const char* name, std::string& into) {
    const char* value = std::getenv(name);
    if (value == nullptr || *value == '\0') {
      errors.push_back(std::string(name) + " is not set");
    } else {
      into = value;
    }
  };
  read(kLlmEndpointVar, config.endpoint);
  read(kLlmModelVar, config.model);
  read(kLlmApiKeyVar, config.api_key);
  if (!config.endpoint.empty()) {
    if (auto parts = split_endpoint(config.endpoint); !parts) {
      errors.insert(errors.end(), parts.errors().begin(), parts.errors().end());
    }
  }
  if (!errors.empty()) return Result<HttpLlmConfig>::failure(std::move(errors));
  return config;
}

std::vector<std::string> SseDecoder::feed(std::string_view bytes) {
  std::vector<std::string> out;
  buffer_.append(bytes);
  std::size_t start = 0;
  for (auto nl = buffer_.find('\n'); nl != std::string::npos;
       nl = buffer_.find('\n', start)) {
    std::string_view text(buffer_.data() + start, nl - start);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    line(text, out);
    start = nl + 1;
  }
  buffer_.erase(0, start);
  return out;
}

void SseDecoder::line(std::string_view text, std::vector<std::string>& out) {
  if (done_ || !text.starts_with("data:")) return;
  text.remove_prefix(5);
  if (text.starts_with(' ')) text.remove_prefix(1);
  if (text == "[DONE]") {
    done_ = true;
    return;
  }
  auto payload = nlohmann::json::parse(text, nullptr, false);
  if (payload.is_discarded()) {
    throw ProviderError("malformed stream record: " + std::string(text));
  }
  if (!payload.contains("choices") || !payload["choices"].is_array() ||
      payload["choices"].empty()) {
    return;
  }
  const auto& delta = payload["choices"][0].value("delta", nlohmann::json{});
  if (delta.is_object() && delta.contains("content") &&
      delta["content"].is_string()) {
    auto content = delta["content"].get<std::string>();
    if (!content.empty()) out.push_back(std::move(content));
  }
}

HttpLlm::HttpLlm(HttpLlmConfig config) : config_(std::move(config)) {
  auto parts = split_endpoint(config_.endpoint);
  if (!parts) throw std::invalid_argument(parts.error_text());
  parts_ = parts.value();
}

bool HttpLlm::tls_supported() {
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
  return true;
#else
  return false;
#endif
}

void HttpLlm::stream_completion(const std::string& prompt,
                                const ChunkSink& sink) {
  if (parts_.origin.starts_with("https") && !tls_supported()) {
    throw ProviderError("https endpoint requested but built without TLS");
  }
  httplib::Client client(parts_.origin);
  client.set_read_timeout(config_.timeout);
  client.set_connection_timeout(std::chrono::seconds(15));

  const nlohmann::json body = {
      {"model", config_.model},
      {"stream", true},
      {"messages", {{{"role", "user"}, {"content", prompt}}}}};

  httplib::Request request;
  request.method = "POST";
  request.path = parts_.path;
  request.headers = {{"Authorization", "Bearer " + config_.api_key},
                     {"Accept", "text/event-stream"},
                     {"Content-Type", "application/json"}};
  request.body =
      body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);

  SseDecoder decoder;
  int status = 0;
  std::string error_body;
  bool cancelled = false;
  request.response_handler = [&](const httplib::Response& response) {
    status = response.status;
    return true;
  };
  request.content_receiver = [&](const char* data, std::size_t length,
                                 std::uint64_t, std::uint64_t) {
    if (status != 200) {
      if (error_body.size() < 1024) error_body.append(data, length);
      return true;
    }
    for (const auto& piece : decoder.feed({data, length})) {
      if (!sink(piece)) {
        cancelled = true;
        return false;
      }
    }
    return !decoder.done();
  };

  const auto result = client.send(request);
  if (cancelled) return;
  if (status != 0 && status != 200) {
    throw ProviderError("endpoint returned HTTP " + std::to_string(status) +
                        (error_body.empty() ? "" : ": " + error_body));
  }
  // Stopping the receiver after [DONE] reports as a cancelled request.
  if (!result && !decoder.done()) {
    throw ProviderError("request failed: " + httplib::to_string(result.error()));
  }
}

}  // namespace exprmark
