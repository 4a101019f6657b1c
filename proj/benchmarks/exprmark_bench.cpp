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

#include <benchmark/benchmark.h>

#include <memory>
#include <string>

#include "exprmark/defaults.hpp"
#include "exprmark/pipeline.hpp"
#include "exprmark/ssml_compiler.hpp"
#include "exprmark/stream_parser.hpp"

namespace {

using namespace exprmark;

std::string make_response(int sentences) {
  static const char* const kPieces[] = {
      "Let me think <filler type=\"thinking\"> about that. ",
      "<bookmark mark=\"pointImportant\"/>The key point is that "
      "<prosody rate=\"-10%\" volume=\"loud\">only the changes are sent</prosody>. ",
      "Motion vectors describe how blocks moved <break time=\"300ms\"/> between frames. ",
      "<filler type=\"transition\"> next comes the transform step, "
      "<filler type=\"hesitation\"> which is a little technical. ",
      "<bookmark mark=\"wrapUp\"/>To sum up, prediction and coding work together. ",
  };
  std::string out;
  for (int i = 0; i < sentences; ++i) out += kPieces[i % 5];
  return out;
}

void BM_ParseDocument(benchmark::State& state) {
  const auto text = make_response(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parse_document(text));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseDocument)->Arg(5)->Arg(50)->Arg(500);

void BM_StreamParse(benchmark::State& state) {
  const auto text = make_response(50);
  const auto chunk = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    StreamParser parser;
    for (std::size_t pos = 0; pos < text.size(); pos += chunk) {
      benchmark::DoNotOptimize(parser.feed(std::string_view(text).substr(pos, chunk)));
    }
    benchmark::DoNotOptimize(parser.finish());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_StreamParse)->Arg(1)->Arg(7)->Arg(64)->Arg(4096);

void BM_Compile(benchmark::State& state) {
  const auto text = make_response(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    SelectionState selection(1);
    benchmark::DoNotOptimize(compile(text, default_filler_library(),
                                     default_gesture_library(), {}, selection));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_Compile)->Arg(5)->Arg(50)->Arg(500);

void BM_MockSession(benchmark::State& state) {
  const auto text = make_response(50);
  const auto chunk = static_cast<std::size_t>(state.range(0));
  const SessionResources resources{default_filler_library(), default_gesture_library(),
                                   default_prompt_content(), default_prompt_template()};
  std::size_t segments = 0;
  for (auto _ : state) {
    ProviderSuite providers{std::make_shared<MockLlm>(text, chunk), nullptr, nullptr};
    const auto summary = run_session("Explain motion prediction.", providers, resources,
                                     {}, [&](const OutputSegment&) { ++segments; });
    benchmark::DoNotOptimize(summary);
  }
  state.counters["segments"] = benchmark::Counter(
      static_cast<double>(segments), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_MockSession)->Arg(7)->Arg(64)->Arg(4096)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
