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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "exprmark/defaults.hpp"
#include "exprmark/http_llm.hpp"
#include "exprmark/libraries.hpp"
#include "exprmark/pipeline.hpp"
#include "exprmark/prompt_builder.hpp"
#include "exprmark/records.hpp"
#include "exprmark/ssml_compiler.hpp"
#include "exprmark/stream_parser.hpp"

namespace {

using namespace exprmark;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const json& record) { std::cout << to_json_line(record) << '\n'; }

void emit_error(const std::string& message) {
  emit({{"record", "error"}, {"message", message}});
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), {}};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct LibraryOptions {
  std::string libraries;  // combined document; overridden per part below
  std::string fillers;
  std::string gestures;

  void attach(CLI::App* cmd) {
    cmd->add_option("--libraries", libraries,
                    "Library config with fillers, gestures and marks")
        ->check(CLI::ExistingFile);
    cmd->add_option("--fillers", fillers, "Config to take fillers from")
        ->check(CLI::ExistingFile);
    cmd->add_option("--gestures", gestures,
                    "Config to take gestures and marks from")
        ->check(CLI::ExistingFile);
  }

  // Loaded libraries, or nullopt after printing itemized errors.
  std::optional<std::pair<FillerLibrary, GestureLibrary>> load() const {
    const auto source = [&](const std::string& specific) {
      const std::string& path = specific.empty() ? libraries : specific;
      return path.empty() ? std::string(default_libraries_json())
                          : read_input(path);
    };
    auto f = load_filler_library(source(fillers));
    auto g = load_gesture_library(source(gestures));
    bool ok = true;
    for (const auto* errors : {f ? nullptr : &f.errors(),
                               g ? nullptr : &g.errors()}) {
      if (errors == nullptr) continue;
      ok = false;
      for (const auto& e : *errors) emit_error(e);
    }
    if (!ok) return std::nullopt;
    return std::pair{std::move(f).value(), std::move(g).value()};
  }
};

struct EnvelopeOptions {
  SsmlEnvelope envelope;

  void attach(CLI::App* cmd) {
    cmd->add_option("--voice", envelope.voice_name, "TTS voice name")
        ->capture_default_str();
    cmd->add_option("--lang", envelope.language_tag, "xml:lang of the document")
        ->capture_default_str();
    cmd->add_option("--wpm", envelope.base_rate_wpm, "Base speaking rate")
        ->check(CLI::Range(kMinWordsPerMinute, kMaxWordsPerMinute))
        ->capture_default_str();
  }
};

struct PromptOptions {
  std::string template_path;
  std::string content_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--template", template_path, "Prompt template file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--content", content_path,
                    "Background and annotation defaults (JSON)")
        ->check(CLI::ExistingFile);
  }

  std::optional<std::pair<PromptTemplate, PromptContent>> load(
      const FillerLibrary& fillers, const GestureLibrary& gestures) const {
    auto tmpl = PromptTemplate::parse(
        template_path.empty() ? std::string(default_prompt_template_text())
                              : read_input(template_path));
    auto content = load_prompt_content(
        content_path.empty() ? std::string(default_prompt_content_json())
                             : read_input(content_path),
        fillers, gestures);
    bool ok = true;
    for (const auto* errors : {tmpl ? nullptr : &tmpl.errors(),
                               content ? nullptr : &content.errors()}) {
      if (errors == nullptr) continue;
      ok = false;
      for (const auto& e : *errors) emit_error(e);
    }
    if (!ok) return std::nullopt;
    return std::pair{std::move(tmpl).value(), std::move(content).value()};
  }
};

int cmd_parse(const std::string& input, std::size_t chunk_bytes) {
  const std::string source = read_input(input);
  TaggedDocument doc;
  if (chunk_bytes == 0) {
    doc = parse_document(source);
  } else {
    StreamParser parser;
    for (std::size_t pos = 0; pos < source.size(); pos += chunk_bytes) {
      append_events(doc.events,
                    parser.feed(std::string_view(source).substr(pos, chunk_bytes))
                        .events);
    }
    append_events(doc.events, parser.finish().events);
    doc.diagnostics = parser.diagnostics();
  }
  for (const auto& event : doc.events) emit(event_record(event));
  for (const auto& d : doc.diagnostics) emit(diagnostic_record(d));
  return has_errors(doc.diagnostics) ? kFailed : kOk;
}

int cmd_compile(const std::string& input, const LibraryOptions& libs,
                const EnvelopeOptions& env, std::uint64_t seed,
                bool timeline_only) {
  const std::string source = read_input(input);
  auto loaded = libs.load();
  if (!loaded) return kFailed;
  SelectionState state(seed);
  const auto utterance =
      compile(source, loaded->first, loaded->second, env.envelope, state);
  if (timeline_only) {
    for (const auto& stamp : utterance.timeline) {
      emit(stamp_record(stamp, utterance.events[stamp.event_index]));
    }
  } else {
    emit({{"record", "ssml"}, {"ssml", utterance.ssml}});
    for (const auto& cue : utterance.cues) emit(cue_record(cue));
  }
  for (const auto& d : utterance.diagnostics) emit(diagnostic_record(d));
  return has_errors(utterance.diagnostics) ? kFailed : kOk;
}

int cmd_prompt(const std::string& question, const LibraryOptions& libs,
               const PromptOptions& prompt, bool raw) {
  auto loaded = libs.load();
  if (!loaded) return kFailed;
  auto parts = prompt.load(loaded->first, loaded->second);
  if (!parts) return kFailed;
  const auto& [tmpl, content] = *parts;
  auto bundle = build_prompt(content.background, content.speech,
                             content.gesture, question, tmpl);
  if (!bundle) throw UsageError(bundle.error_text());
  if (raw) {
    std::cout << bundle->rendered << '\n';
  } else {
    emit({{"record", "prompt"}, {"text", bundle->rendered}});
  }
  return kOk;
}

int cmd_lint(const std::vector<std::string>& files, const PromptOptions& prompt) {
  int status = kOk;
  for (const auto& file : files) {
    const std::string text = read_input(file);
    auto fillers = load_filler_library(text);
    auto gestures = load_gesture_library(text);
    std::vector<std::string> errors;
    for (const auto* e : {fillers ? nullptr : &fillers.errors(),
                          gestures ? nullptr : &gestures.errors()}) {
      if (e != nullptr) errors.insert(errors.end(), e->begin(), e->end());
    }
    if (errors.empty() &&
        (!prompt.template_path.empty() || !prompt.content_path.empty())) {
      std::ostringstream captured;
      auto* saved = std::cout.rdbuf(captured.rdbuf());
      const bool ok = prompt.load(fillers.value(), gestures.value()).has_value();
      std::cout.rdbuf(saved);
      if (!ok) {
        std::istringstream lines(captured.str());
        for (std::string line; std::getline(lines, line);) {
          errors.push_back(json::parse(line).at("message").get<std::string>());
        }
      }
    }
    emit({{"record", "lint"},
          {"file", file},
          {"ok", errors.empty()},
          {"errors", errors}});
    if (!errors.empty()) status = kFailed;
  }
  return status;
}

struct SessionOptions {
  std::string question;
  std::string mock_response;
  bool live = false;
  std::size_t mock_chunk_bytes = 16;
  int mock_delay_ms = 0;
  std::string flush = "sentence";
  std::uint64_t seed = 0;
  std::string transcript;
  bool no_tts = false;
};

FlushPolicy parse_flush(const std::string& text) {
  if (text == "sentence") return FlushPolicy::sentence();
  if (text.starts_with("bytes:")) {
    try {
      std::size_t used = 0;
      const auto n = std::stoull(text.substr(6), &used);
      if (used == text.size() - 6) return FlushPolicy::bytes(n);
    } catch (const std::exception&) {
    }
  }
  throw UsageError("--flush must be \"sentence\" or \"bytes:N\"");
}

int cmd_session(const SessionOptions& opts, const LibraryOptions& libs,
                const EnvelopeOptions& env, const PromptOptions& prompt) {
  if (opts.question.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw UsageError("--question must not be empty");
  }
  SessionConfig config;
  config.seed = opts.seed;
  config.envelope = env.envelope;
  config.flush_policy = parse_flush(opts.flush);
  if (auto problems = config.validate(); !problems.empty()) {
    throw UsageError(problems.front());
  }

  ProviderSuite providers;
  if (opts.live) {
    auto http = HttpLlmConfig::from_environment();
    if (!http) {
      std::cerr << "live mode needs " << kLlmEndpointVar << ", "
                << kLlmModelVar << " and " << kLlmApiKeyVar << ":\n";
      for (const auto& e : http.errors()) std::cerr << "  " << e << '\n';
      return kUsage;
    }
    providers.llm = std::make_shared<HttpLlm>(http.value());
  } else {
    auto mock = std::make_shared<MockLlm>(read_input(opts.mock_response),
                                          opts.mock_chunk_bytes);
    mock->set_chunk_delay(std::chrono::milliseconds(opts.mock_delay_ms));
    providers.llm = mock;
  }
  if (!opts.no_tts) providers.tts = std::make_shared<MockTts>(env.envelope.timing());

  auto loaded = libs.load();
  if (!loaded) return kFailed;
  auto parts = prompt.load(loaded->first, loaded->second);
  if (!parts) return kFailed;

  std::ofstream transcript;
  if (!opts.transcript.empty()) {
    transcript.open(opts.transcript, std::ios::binary | std::ios::trunc);
    if (!transcript) throw UsageError("cannot write " + opts.transcript);
    config.transcript = &transcript;
  }

  const SessionResources resources{loaded->first, loaded->second,
                                   parts->second, parts->first};
  const auto summary = run_session(
      opts.question, providers, resources, config,
      [](const OutputSegment& segment) {
        std::cout << to_json_line(segment_record(segment)) << '\n' << std::flush;
      });
  emit(summary_record(summary));
  return summary.error ? kFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile tagged agent responses into SSML and gesture cues"};
  app.require_subcommand(1, 1);

  std::string input;
  LibraryOptions libs;
  EnvelopeOptions env;
  PromptOptions prompt;
  std::uint64_t seed = 0;

  auto* parse = app.add_subcommand("parse", "List the events of tagged text");
  std::size_t chunk_bytes = 0;
  parse->add_option("input", input, "File to read, or - for stdin");
  parse->add_option("--chunk-bytes", chunk_bytes,
                    "Feed the streaming parser N bytes at a time");

  auto* compile_cmd = app.add_subcommand("compile", "Emit SSML and the cue table");
  compile_cmd->add_option("input", input, "File to read, or - for stdin");
  compile_cmd->add_option("--seed", seed, "Selection seed")->capture_default_str();
  libs.attach(compile_cmd);
  env.attach(compile_cmd);

  auto* timeline = app.add_subcommand("timeline", "Estimated start time per event");
  timeline->add_option("input", input, "File to read, or - for stdin");
  timeline->add_option("--seed", seed, "Selection seed")->capture_default_str();
  libs.attach(timeline);
  env.attach(timeline);

  auto* prompt_cmd = app.add_subcommand("prompt", "Render the system prompt");
  std::string question;
  bool raw = false;
  prompt_cmd->add_option("--question,-q", question, "Learner question")->required();
  prompt_cmd->add_flag("--raw", raw, "Print plain text instead of a record");
  libs.attach(prompt_cmd);
  prompt.attach(prompt_cmd);

  auto* lint = app.add_subcommand("lint-libraries", "Validate library configs");
  std::vector<std::string> lint_files;
  lint->add_option("files", lint_files, "Library config files")->required();
  prompt.attach(lint);

  auto* session = app.add_subcommand("session", "Run a question end to end");
  SessionOptions sopts;
  session->add_option("--question,-q", sopts.question, "Learner question")
      ->required();
  auto* mock_opt = session->add_option("--mock-response", sopts.mock_response,
                                       "Canned tagged response to replay");
  auto* live_opt = session->add_flag(
      "--live", sopts.live,
      "Stream from the endpoint named by EXPRMARK_LLM_* variables");
  mock_opt->excludes(live_opt);
  session->add_option("--mock-chunk-bytes", sopts.mock_chunk_bytes,
                      "Replay chunk size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  session->add_option("--mock-delay-ms", sopts.mock_delay_ms,
                      "Delay before each replayed chunk")
      ->check(CLI::NonNegativeNumber);
  session->add_option("--flush", sopts.flush, "sentence or bytes:N")
      ->capture_default_str();
  session->add_option("--seed", sopts.seed, "Selection seed");
  session->add_option("--transcript", sopts.transcript,
                      "Write segment records to this file");
  session->add_flag("--no-tts", sopts.no_tts, "Skip the mock synthesizer");
  libs.attach(session);
  env.attach(session);
  prompt.attach(session);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*parse) return cmd_parse(input, chunk_bytes);
    if (*compile_cmd) return cmd_compile(input, libs, env, seed, false);
    if (*timeline) return cmd_compile(input, libs, env, seed, true);
    if (*prompt_cmd) return cmd_prompt(question, libs, prompt, raw);
    if (*lint) return cmd_lint(lint_files, prompt);
    if (*session) {
      if (!sopts.live && sopts.mock_response.empty()) {
        throw UsageError("session needs --mock-response PATH or --live");
      }
      return cmd_session(sopts, libs, env, prompt);
    }
  } catch (const UsageError& e) {
    std::cerr << "exprmark: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "exprmark: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
