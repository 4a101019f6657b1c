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

#include "exprmark/markup.hpp"
#include "printers.hpp"

namespace exprmark {
namespace {

std::optional<AttributeValue> norm(std::string_view raw, AttributeKind kind,
                                   std::vector<ParseDiagnostic>* diags = nullptr) {
  std::vector<ParseDiagnostic> local;
  auto v = normalize_attribute_value(raw, kind, diags ? *diags : local, 7);
  return v;
}

TEST(Normalize, Durations) {
  EXPECT_EQ(std::get<int>(*norm("500ms", AttributeKind::Duration)), 500);
  EXPECT_EQ(std::get<int>(*norm("1.5s", AttributeKind::Duration)), 1500);
  EXPECT_EQ(std::get<int>(*norm(" 250ms ", AttributeKind::Duration)), 250);
  EXPECT_EQ(std::get<int>(*norm("0.4ms", AttributeKind::Duration)), 0);
  EXPECT_FALSE(norm("500", AttributeKind::Duration));
  EXPECT_FALSE(norm("ms", AttributeKind::Duration));
  EXPECT_FALSE(norm("fast", AttributeKind::Duration));
}

TEST(Normalize, DurationClampWarns) {
  std::vector<ParseDiagnostic> diags;
  EXPECT_EQ(std::get<int>(*norm("9000ms", AttributeKind::Duration, &diags)), 5000);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, "value-clamped");
  EXPECT_EQ(diags[0].severity, Severity::Warning);
  EXPECT_EQ(diags[0].byte_offset, 7u);

  diags.clear();
  EXPECT_EQ(std::get<int>(*norm("-5ms", AttributeKind::Duration, &diags)), 0);
  EXPECT_EQ(diags.size(), 1u);

  diags.clear();
  EXPECT_EQ(std::get<int>(*norm("99999999999999999999999s", AttributeKind::Duration,
                                &diags)),
            5000);
  EXPECT_EQ(diags.size(), 1u);
}

TEST(Normalize, Percentages) {
  EXPECT_EQ(std::get<int>(*norm("-10%", AttributeKind::Percent)), -10);
  EXPECT_EQ(std::get<int>(*norm("+3%", AttributeKind::Percent)), 3);
  EXPECT_EQ(std::get<int>(*norm("7%", AttributeKind::Percent)), 7);
  std::vector<ParseDiagnostic> diags;
  EXPECT_EQ(std::get<int>(*norm("-80%", AttributeKind::Percent, &diags)), -50);
  EXPECT_EQ(std::get<int>(*norm("+51%", AttributeKind::Percent, &diags)), 50);
  EXPECT_EQ(diags.size(), 2u);
  EXPECT_FALSE(norm("10", AttributeKind::Percent));
  EXPECT_FALSE(norm("%", AttributeKind::Percent));
}

TEST(Normalize, InvalidValuesAreErrors) {
  for (auto [raw, kind, code] :
       {std::tuple{"soft-ish", AttributeKind::Volume, "invalid-volume"},
        std::tuple{"sneeze", AttributeKind::FillerType, "invalid-filler-type"},
        std::tuple{"9lives", AttributeKind::Mark, "invalid-mark"},
        std::tuple{"x", AttributeKind::Duration, "invalid-duration"},
        std::tuple{"x%", AttributeKind::Percent, "invalid-percent"}}) {
    std::vector<ParseDiagnostic> diags;
    EXPECT_FALSE(norm(raw, kind, &diags)) << raw;
    ASSERT_EQ(diags.size(), 1u);
    EXPECT_EQ(diags[0].code, code);
    EXPECT_EQ(diags[0].severity, Severity::Error);
  }
}

TEST(Normalize, EnumsAndMarks) {
  EXPECT_EQ(std::get<VolumeLevel>(*norm("x-loud", AttributeKind::Volume)),
            VolumeLevel::XLoud);
  EXPECT_EQ(std::get<FillerKind>(*norm("transition", AttributeKind::FillerType)),
            FillerKind::Transition);
  EXPECT_EQ(std::get<std::string>(*norm("pointImportant", AttributeKind::Mark)),
            "pointImportant");
}

TEST(Normalize, FormatRoundTrips) {
  for (int pct : {-50, -1, 0, 1, 50}) {
    const auto text = format_attribute_value(pct, AttributeKind::Percent);
    EXPECT_EQ(std::get<int>(*norm(text, AttributeKind::Percent)), pct);
  }
  EXPECT_EQ(format_percent(0), "+0%");
  EXPECT_EQ(format_percent(-10), "-10%");
  EXPECT_EQ(format_attribute_value(1000, AttributeKind::Duration), "1000ms");
}

TEST(Events, AppendCoalescesText) {
  std::vector<MarkupEvent> events;
  append_event(events, TextRun{"ab"});
  append_event(events, TextRun{""});
  append_event(events, TextRun{"cd"});
  append_event(events, Break{10});
  append_event(events, TextRun{"e"});
  const std::vector<MarkupEvent> expected = {TextRun{"abcd"}, Break{10},
                                             TextRun{"e"}};
  EXPECT_EQ(events, expected);
  EXPECT_EQ(coalesce(std::vector<MarkupEvent>{TextRun{"a"}, TextRun{"b"}}),
            (std::vector<MarkupEvent>{TextRun{"ab"}}));
}

TEST(Events, SpokenTextIncludesPassthrough) {
  const std::vector<MarkupEvent> events = {TextRun{"Hi "}, Bookmark{"m"},
                                           LiteralPassthrough{"<x>"},
                                           TextRun{" there"}};
  EXPECT_EQ(spoken_text(events), "Hi <x> there");
}

TEST(Schemas, CoverTheTagLanguage) {
  ASSERT_NE(find_tag_schema("break"), nullptr);
  ASSERT_NE(find_tag_schema("prosody"), nullptr);
  ASSERT_NE(find_tag_schema("filler"), nullptr);
  ASSERT_NE(find_tag_schema("bookmark"), nullptr);
  EXPECT_EQ(find_tag_schema("speak"), nullptr);
  EXPECT_TRUE(find_tag_schema("prosody")->is_container);
  EXPECT_FALSE(find_tag_schema("break")->is_container);
  EXPECT_EQ(find_tag_schema("bookmark")->modality, Modality::Gesture);
  for (const auto& schema : tag_schemas()) {
    EXPECT_NE(schema.illustration.find("<" + std::string(schema.name)),
              std::string_view::npos);
  }
}

TEST(Identifiers, Rules) {
  EXPECT_TRUE(is_identifier("a"));
  EXPECT_TRUE(is_identifier("wrap_up-2"));
  EXPECT_FALSE(is_identifier(""));
  EXPECT_FALSE(is_identifier("2a"));
  EXPECT_FALSE(is_identifier("a b"));
}

}  // namespace
}  // namespace exprmark
