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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "exprmark/defaults.hpp"
#include "exprmark/pipeline.hpp"
#include "exprmark/ssml_compiler.hpp"
#include "exprmark/stream_parser.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "xml_check.hpp"

namespace {

using namespace exprmark;
using Failure = std::optional<std::string>;
using Events = std::vector<MarkupEvent>;

SessionResources resources() {
  return {default_filler_library(), default_gesture_library(),
          default_prompt_content(), default_prompt_template()};
}

CompiledUtterance offline(std::string_view text, std::uint64_t seed) {
  SelectionState state(seed);
  return compile(text, default_filler_library(), default_gesture_library(), {},
                 state);
}

Failure filler_golden() {
  const auto u = offline("Let me think <filler type=\"thinking\"> the answer is X.",
                         testing::kUmmSeed);
  const Events fragment = {ProsodyOpen{-50, VolumeLevel::Loud, 0}, TextRun{" umm..."},
                           ProsodyClose{}, Break{1000}};
  const auto it = std::search(u.events.begin(), u.events.end(), fragment.begin(),
                              fragment.end());
  if (it == u.events.end()) return "rendered filler fragment not found";
  if (u.ssml.find("<prosody rate=\"-50%\" volume=\"loud\"> umm...</prosody>"
                  "<break time=\"1000ms\"/>") == std::string::npos) {
    return "SSML lacks the rendered filler: " + u.ssml;
  }
  return std::nullopt;
}

Failure gesture_golden() {
  const auto u = offline("Remember <bookmark mark=\"pointImportant\"> this.", 0);
  if (u.cues.size() != 1) return "expected one cue";
  if (u.cues[0].gesture.category != GestureCategory::Emphasizing) {
    return "cue category is " + std::string(to_string(u.cues[0].gesture.category));
  }
  if (u.ssml.find("<bookmark mark=\"pointImportant\"/>") == std::string::npos) {
    return "bookmark missing from SSML";
  }
  return std::nullopt;
}

Failure chunking_invariance() {
  testing::Rng rng(0xC0FFEE);
  for (int i = 0; i < 1500; ++i) {
    const auto src = i % 3 == 2 ? testing::random_bytes(rng, 300)
                                : testing::random_tagged_text(rng, 60);
    const auto pieces = testing::random_partition(rng, src);
    StreamParser parser;
    TaggedDocument streamed;
    for (const auto& p : pieces) append_events(streamed.events, parser.feed(p).events);
    append_events(streamed.events, parser.finish().events);
    streamed.diagnostics = parser.diagnostics();
    if (!(streamed == parse_document(src))) {
      return "mismatch on case " + std::to_string(i);
    }
  }
  return std::nullopt;
}

Failure fuzz_well_formed() {
  testing::Rng rng(0xF00D);
  for (int i = 0; i < 10000; ++i) {
    const auto src = testing::random_bytes(rng, 400);
    CompiledUtterance u;
    try {
      u = offline(src, static_cast<std::uint64_t>(i));
    } catch (const std::exception& e) {
      return "compile threw on case " + std::to_string(i) + ": " + e.what();
    }
    if (auto problem = testing::xml_problem(u.ssml); !problem.empty()) {
      return "case " + std::to_string(i) + ": " + problem;
    }
  }
  return std::nullopt;
}

Failure streaming_equivalence() {
  testing::Rng rng(0xBEEF);
  for (int i = 0; i < 200; ++i) {
    const auto answer = testing::random_response(rng, 2 + i % 9);
    const auto seed = static_cast<std::uint64_t>(i) * 7919;
    const auto expected = offline(answer, seed);
    for (std::size_t chunk : {1, 3, 7, 64, 4096}) {
      SessionConfig config;
      config.seed = seed;
      config.flush_policy = i % 2 ? FlushPolicy::sentence() : FlushPolicy::bytes(256);
      ProviderSuite providers{std::make_shared<MockLlm>(answer, chunk), nullptr, nullptr};
      Events joined;
      std::vector<GestureCue> cues;
      std::string body;
      const auto summary = run_session(
          "q", providers, resources(), config, [&](const OutputSegment& s) {
            append_events(joined, s.events);
            cues.insert(cues.end(), s.cues.begin(), s.cues.end());
            body += s.ssml_fragment;
          });
      const std::string where =
          "response " + std::to_string(i) + " chunk " + std::to_string(chunk);
      if (summary.error) return where + ": " + *summary.error;
      if (joined != expected.events) return where + ": events differ";
      if (cues != expected.cues) return where + ": cues differ";
      if (wrap_envelope(body, {}) != expected.ssml) return where + ": SSML differs";
    }
  }
  return std::nullopt;
}

Failure timing_checks() {
  const auto stamp = [](Events events, double wpm) {
    events.emplace_back(Bookmark{"m"});
    return estimate_timeline(events, {wpm}).back().start_ms;
  };
  const auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
  };
  const TextRun five{"one two three four five"};
  const double plain = stamp({five}, 150);
  if (!close(plain, testing::speech_ms(5, 150)) || !close(plain, 2000.0)) {
    return "plain stamp " + std::to_string(plain);
  }
  const double slow =
      stamp({ProsodyOpen{-50, VolumeLevel::Medium, 0}, five, ProsodyClose{}}, 150);
  if (!close(slow, 4000.0)) return "rate -50% stamp " + std::to_string(slow);
  const double neutral =
      stamp({ProsodyOpen{0, VolumeLevel::Medium, 0}, five, ProsodyClose{}}, 150);
  if (!close(neutral, plain)) return "rate 0% changed the stamp";
  testing::Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    auto doc = parse_document(testing::random_tagged_text(rng, 40));
    std::erase_if(doc.events, [](const MarkupEvent& e) {
      return std::holds_alternative<Break>(e) || std::holds_alternative<Filler>(e);
    });
    const auto full = estimate_timeline(doc.events, {300});
    const auto half = estimate_timeline(doc.events, {150});
    for (std::size_t k = 0; k < full.size(); ++k) {
      if (!close(half[k].start_ms, 2 * full[k].start_ms)) {
        return "halving wpm did not double stamp " + std::to_string(k);
      }
    }
  }
  return std::nullopt;
}

Failure selection_policies() {
  const auto& gestures = default_gesture_library();
  const auto& fillers = default_filler_library();
  const auto trace = [&](std::uint64_t seed) {
    SelectionState state(seed);
    std::vector<std::string> out;
    for (int i = 0; i < 10000; ++i) {
      out.push_back(select_gesture(gestures, "pointImportant", state)->id);
    }
    for (int i = 0; i < 1000; ++i) {
      out.push_back(select_filler(fillers, FillerKind::Thinking, state).surface);
    }
    return out;
  };
  const auto a = trace(424242);
  for (std::size_t i = 1; i < 10000; ++i) {
    if (a[i] == a[i - 1]) return "immediate repeat at call " + std::to_string(i);
  }
  std::map<std::string, int> counts;
  for (std::size_t i = 10000; i < a.size(); ++i) ++counts[a[i]];
  for (const auto& entry : fillers.entries_of(FillerKind::Thinking)) {
    if (counts[entry->surface] < 400) {
      return entry->surface + " drawn " + std::to_string(counts[entry->surface]) +
             " times";
    }
  }
  if (trace(424242) != a) return "same seed gave a different trace";
  return std::nullopt;
}

Failure prompt_structure() {
  const auto& c = default_prompt_content();
  const std::string question = "How does video compression save bandwidth?";
  auto bundle = build_prompt(c.background, c.speech, c.gesture, question,
                             default_prompt_template());
  if (!bundle) return bundle.error_text();
  const auto& text = bundle->rendered;
  const std::vector<std::string> order = {c.background.role_definition,
                                          c.speech.knowledge, c.gesture.knowledge,
                                          question};
  std::size_t last = 0;
  for (const auto& part : order) {
    const auto at = text.find(part);
    if (at == std::string::npos || at < last) return "section out of order";
    last = at;
  }
  if (!text.ends_with(question)) return "question is not last";
  for (const auto& schema : tag_schemas()) {
    if (text.find("<" + std::string(schema.name)) == std::string::npos) {
      return "tag " + std::string(schema.name) + " not mentioned";
    }
  }
  for (const char* s : {"you know", "umm...", "uh...", "thinking", "emphasizing",
                        "summarizing"}) {
    if (text.find(s) == std::string::npos) return std::string(s) + " not mentioned";
  }
  return std::nullopt;
}

Failure first_output_latency() {
  for (int sentences : {2, 50}) {
    std::vector<std::string> ticks;
    for (int i = 0; i < sentences; ++i) {
      ticks.push_back("This is sentence " + std::to_string(i + 1) + ". ");
    }
    auto llm = std::make_shared<MockLlm>(ticks);
    std::mutex m;
    std::condition_variable cv;
    std::size_t emitted = 0;
    std::vector<std::size_t> emitted_after_tick;
    llm->set_after_chunk([&](std::size_t tick) {
      std::unique_lock lock(m);
      cv.wait_for(lock, std::chrono::seconds(1), [&] { return emitted > tick; });
      emitted_after_tick.push_back(emitted);
    });
    ProviderSuite providers{llm, nullptr, nullptr};
    std::optional<std::size_t> first_chunks;
    run_session("q", providers, resources(), {}, [&](const OutputSegment& s) {
      std::lock_guard lock(m);
      if (!first_chunks) first_chunks = s.chunks_consumed;
      ++emitted;
      cv.notify_all();
    });
    const std::string where = std::to_string(sentences) + " sentences: ";
    if (!first_chunks) return where + "no segment";
    if (*first_chunks != 1) {
      return where + "first segment after tick " + std::to_string(*first_chunks);
    }
    if (emitted_after_tick.empty() || emitted_after_tick[0] != 1) {
      return where + "segment count after tick 1 is not 1";
    }
  }
  return std::nullopt;
}

struct Criterion {
  int number;
  const char* name;
  double budget_s;
  std::function<Failure()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "filler mapping golden example", 1, filler_golden},
      {2, "gesture mapping golden example", 1, gesture_golden},
      {3, "chunking invariance", 30, chunking_invariance},
      {4, "SSML well-formedness under fuzz", 60, fuzz_well_formed},
      {5, "streaming/offline equivalence", 60, streaming_equivalence},
      {6, "timing model", 1, timing_checks},
      {7, "selection policies", 10, selection_policies},
      {8, "prompt structure", 1, prompt_structure},
      {9, "first-output latency", 5, first_output_latency},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Failure failure;
    try {
      failure = c.check();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!failure && seconds > c.budget_s) {
      failure = "took " + std::to_string(seconds) + " s, budget " +
                std::to_string(c.budget_s) + " s";
    }
    std::printf("%s criterion %d: %s (%.3f s)%s%s\n", failure ? "FAIL" : "PASS",
                c.number, c.name, seconds, failure ? " -- " : "",
                failure ? failure->c_str() : "");
    if (failure) ++failures;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
