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

#include <gtest/gtest.h>

#include "exprmark/stream_parser.hpp"
#include "generators.hpp"
#include "printers.hpp"

namespace exprmark {
namespace {

using Events = std::vector<MarkupEvent>;

std::vector<std::string> codes(const TaggedDocument& doc) {
  std::vector<std::string> out;
  for (const auto& d : doc.diagnostics) out.push_back(d.code);
  return out;
}

TaggedDocument parse_chunks(const std::vector<std::string>& chunks) {
  StreamParser parser;
  TaggedDocument doc;
  for (const auto& c : chunks) append_events(doc.events, parser.feed(c).events);
  append_events(doc.events, parser.finish().events);
  doc.diagnostics = parser.diagnostics();
  return doc;
}

TEST(Parser, PlainText) {
  const auto doc = parse_document("Hello world.");
  EXPECT_EQ(doc.events, (Events{TextRun{"Hello world."}}));
  EXPECT_TRUE(doc.diagnostics.empty());
}

TEST(Parser, EmptyInput) {
  const auto doc = parse_document("");
  EXPECT_TRUE(doc.events.empty());
  EXPECT_TRUE(doc.diagnostics.empty());
}

TEST(Parser, AllTagKinds) {
  const auto doc = parse_document(
      "Hi <break time=\"500ms\"><prosody rate=\"-10%\" volume=\"medium\" "
      "pitch=\"+3%\">key</prosody><filler type=\"thinking\"/>"
      "<bookmark mark=\"pointImportant\">.");
  const Events expected = {TextRun{"Hi "},
                           Break{500},
                           ProsodyOpen{-10, VolumeLevel::Medium, 3},
                           TextRun{"key"},
                           ProsodyClose{},
                           Filler{FillerKind::Thinking},
                           Bookmark{"pointImportant"},
                           TextRun{"."}};
  EXPECT_EQ(doc.events, expected);
  EXPECT_TRUE(doc.diagnostics.empty());
}

TEST(Parser, WhitespaceAroundEqualsAndSlash) {
  const auto doc = parse_document("<break time = \"1s\" /><break  time=\"2s\">");
  EXPECT_EQ(doc.events, (Events{Break{1000}, Break{2000}}));
  EXPECT_TRUE(doc.diagnostics.empty());
}

TEST(Parser, DecodesReferences) {
  const auto doc = parse_document("a &lt;b&gt; &amp; &quot; &");
  EXPECT_EQ(doc.events, (Events{TextRun{"a <b> & &quot; &"}}));
}

TEST(Parser, LessThanNotStartingATagIsText) {
  const auto doc = parse_document("1 < 2 and 3<4");
  EXPECT_EQ(doc.events, (Events{TextRun{"1 < 2 and 3<4"}}));
  EXPECT_TRUE(doc.diagnostics.empty());
}

TEST(Parser, UnknownTagPassesThrough) {
  const auto doc = parse_document("a <wave hand=\"left\"> b");
  EXPECT_EQ(doc.events, (Events{TextRun{"a "},
                                LiteralPassthrough{"<wave hand=\"left\">"},
                                TextRun{" b"}}));
  ASSERT_EQ(doc.diagnostics.size(), 1u);
  EXPECT_EQ(doc.diagnostics[0].code, "unknown-tag");
  EXPECT_EQ(doc.diagnostics[0].byte_offset, 2u);
  EXPECT_EQ(doc.diagnostics[0].severity, Severity::Warning);
}

TEST(Parser, RecoveryCodes) {
  struct Case {
    std::string input;
    std::string code;
  };
  for (const auto& c : std::vector<Case>{
           {"<break>", "missing-attribute"},
           {"<break time=\"1s\" speed=\"2\">", "unknown-attribute"},
           {"</break>", "void-close-tag"},
           {"</prosody>", "unbalanced-close"},
           {"<prosody rate=\"+5%\"/>", "self-closing-container"},
           {"<break time=500ms>", "malformed-tag"},
           {"<break time=\"soon\">", "invalid-duration"},
           {"<prosody volume=\"huge\">x</prosody>", "invalid-volume"},
           {"<filler type=\"cough\">", "invalid-filler-type"},
           {"<bookmark mark=\"no spaces\">", "invalid-mark"},
           {"<break time=\"1s\"", "unterminated-tag"},
           {"<break <break time=\"1s\">", "unterminated-tag"},
       }) {
    const auto doc = parse_document(c.input);
    ASSERT_FALSE(doc.diagnostics.empty()) << c.input;
    EXPECT_EQ(doc.diagnostics.front().code, c.code) << c.input;
  }
}

TEST(Parser, ValueErrorIsAnErrorAndPassesThrough) {
  const auto doc = parse_document("<break time=\"soon\">");
  EXPECT_EQ(doc.events, (Events{LiteralPassthrough{"<break time=\"soon\">"}}));
  ASSERT_EQ(doc.diagnostics.size(), 1u);
  EXPECT_TRUE(has_errors(doc.diagnostics));
}

TEST(Parser, ClampedValueIsKeptWithWarning) {
  const auto doc = parse_document("<break time=\"7000ms\">");
  EXPECT_EQ(doc.events, (Events{Break{5000}}));
  EXPECT_EQ(codes(doc), std::vector<std::string>{"value-clamped"});
  EXPECT_FALSE(has_errors(doc.diagnostics));
}

TEST(Parser, DuplicateAttributeLastWins) {
  const auto doc = parse_document("<bookmark mark=\"a\" mark=\"b\">");
  EXPECT_EQ(doc.events, (Events{Bookmark{"b"}}));
  EXPECT_EQ(codes(doc), std::vector<std::string>{"duplicate-attribute"});
}

TEST(Parser, UnclosedProsodyIsClosedAtEnd) {
  const auto doc = parse_document("<prosody rate=\"+10%\">open");
  EXPECT_EQ(doc.events, (Events{ProsodyOpen{10, VolumeLevel::Medium, 0},
                                TextRun{"open"}, ProsodyClose{}}));
  EXPECT_EQ(codes(doc), std::vector<std::string>{"unclosed-prosody"});
  EXPECT_EQ(doc.diagnostics[0].byte_offset, 25u);
}

TEST(Parser, DeepProsodyIsCapped) {
  std::string src;
  for (int i = 0; i < 5; ++i) src += "<prosody rate=\"+1%\">";
  src += "x";
  for (int i = 0; i < 5; ++i) src += "</prosody>";
  const auto doc = parse_document(src);
  int depth = 0;
  int max_depth = 0;
  for (const auto& e : doc.events) {
    if (std::holds_alternative<ProsodyOpen>(e)) max_depth = std::max(max_depth, ++depth);
    if (std::holds_alternative<ProsodyClose>(e)) --depth;
  }
  EXPECT_EQ(depth, 0);
  EXPECT_EQ(max_depth, kMaxSourceProsodyDepth);
  const auto found = codes(doc);
  EXPECT_EQ(std::count(found.begin(), found.end(), "prosody-depth"), 4);
}

TEST(Parser, OverlongTagBecomesText) {
  const std::string src = "<" + std::string(400, 'a') + ">";
  const auto doc = parse_document(src);
  ASSERT_FALSE(doc.events.empty());
  EXPECT_EQ(doc.diagnostics.front().code, "tag-too-long");
  EXPECT_EQ(spoken_text(doc), src);
}

TEST(Parser, OverlongTagCutOnCharacterBoundary) {
  std::string src = "<b";
  while (src.size() < 300) src += "\xE4\xB8\xAD";
  const auto doc = parse_document(src);
  const auto& first = std::get<LiteralPassthrough>(doc.events.front());
  EXPECT_LE(first.text.size(), kMaxTagBytes);
  EXPECT_EQ((first.text.size() - 2) % 3, 0u);
}

TEST(Parser, DiagnosticOffsetsAreAbsolute) {
  const std::string src = "0123456789<nope>";
  const auto doc = parse_chunks({"0123", "45678", "9<no", "pe>"});
  ASSERT_EQ(doc.diagnostics.size(), 1u);
  EXPECT_EQ(doc.diagnostics[0].byte_offset, 10u);
  EXPECT_EQ(doc, parse_document(src));
}

TEST(Parser, HoldsPartialTagAcrossFeeds) {
  StreamParser parser;
  auto out = parser.feed("Hi <bre");
  EXPECT_EQ(out.events, (Events{TextRun{"Hi "}}));
  EXPECT_EQ(parser.pending_buffer(), "<bre");
  out = parser.feed("ak time=\"1s\">!");
  EXPECT_EQ(out.events, (Events{Break{1000}, TextRun{"!"}}));
  EXPECT_TRUE(parser.pending_buffer().empty());
  EXPECT_EQ(parser.bytes_consumed(), 21u);
}

TEST(Parser, HoldsPartialReferenceAndCharacter) {
  EXPECT_EQ(parse_chunks({"a &l", "t; b"}).events, (Events{TextRun{"a < b"}}));
  EXPECT_EQ(parse_chunks({"caf\xC3", "\xA9"}).events,
            (Events{TextRun{"caf\xC3\xA9"}}));
  EXPECT_EQ(parse_chunks({"\xF0\x9F", "\x98", "\x80"}).events,
            (Events{TextRun{"\xF0\x9F\x98\x80"}}));
}

TEST(Parser, FeedAfterFinishThrows) {
  StreamParser parser;
  parser.finish();
  EXPECT_THROW(parser.feed("x"), std::logic_error);
  EXPECT_TRUE(parser.finish().events.empty());
}

TEST(Parser, OpenProsodyTracksDepth) {
  StreamParser parser;
  parser.feed("<prosody rate=\"+1%\"><prosody pitch=\"-2%\">");
  EXPECT_EQ(parser.open_prosody(), 2u);
  parser.feed("</prosody>");
  EXPECT_EQ(parser.open_prosody(), 1u);
}

TEST(Parser, ByteAtATimeMatchesWhole) {
  const std::string src =
      "So <filler type=\"thinking\"> the &amp; answer <prosody rate=\"-20%\" "
      "volume=\"loud\">is \xE4\xB8\xAD</prosody><bookmark mark=\"wrapUp\"> <x";
  EXPECT_EQ(parse_chunks(testing::fixed_chunks(src, 1)), parse_document(src));
}

TEST(Parser, RandomPartitionsMatchWhole) {
  testing::Rng rng(1234);
  for (int i = 0; i < 300; ++i) {
    const auto src = testing::random_tagged_text(rng, 40);
    EXPECT_EQ(parse_chunks(testing::random_partition(rng, src)),
              parse_document(src))
        << src;
  }
}

TEST(Parser, NoPassthroughWithoutDiagnostic) {
  testing::Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    const auto doc = parse_document(testing::random_bytes(rng, 200));
    const auto literals = std::count_if(
        doc.events.begin(), doc.events.end(), [](const MarkupEvent& e) {
          return std::holds_alternative<LiteralPassthrough>(e);
        });
    EXPECT_LE(static_cast<std::size_t>(literals), doc.diagnostics.size());
  }
}

}  // namespace
}  // namespace exprmark
