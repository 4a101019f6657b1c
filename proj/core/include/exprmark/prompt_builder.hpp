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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exprmark/libraries.hpp"
#include "exprmark/markup.hpp"
#include "exprmark/result.hpp"

namespace exprmark {

struct BackgroundInfo {
  std::string role_definition;
  std::string output_format;
  std::string response_style;
  std::string scenario_description;
};

/// Knowledge (when and how to use each tag) plus Annotation (worked
/// examples), with the tag-set and library descriptions for one modality.
struct ModalityBlock {
  std::string knowledge;
  std::vector<std::string> annotations;
  std::string tag_set_description;
  std::string library_description;
};

struct PromptBundle {
  BackgroundInfo background;
  ModalityBlock speech;
  ModalityBlock gesture;
  std::string question;
  std::string rendered;
};

std::vector<TagSchema> tag_schemas_for(Modality modality);

/// One line per schema: the canonical illustration, its purpose, and every
/// attribute with its value domain.
std::string render_tag_set(std::span<const TagSchema> schemas);

std::string render_library_summary(const FillerLibrary& library);
std::string render_library_summary(const GestureLibrary& library);

/// Builds a block for `modality`, rendering its tag set. Fails when the
/// knowledge text is empty or some tag of the modality has no annotation
/// that uses it (annotations are checked with the real parser).
Result<ModalityBlock> make_modality_block(Modality modality,
                                          std::string knowledge,
                                          std::vector<std::string> annotations,
                                          std::string library_description);

/// Plain-text template with `{{name}}` placeholders. Every field of the
/// bundle must appear; `{{history}}` is optional.
class PromptTemplate {
 public:
  static Result<PromptTemplate> parse(std::string text);

  std::string render(const std::map<std::string, std::string>& values) const;
  const std::string& text() const { return text_; }

 private:
  PromptTemplate() = default;
  std::string text_;
};

const std::vector<std::string>& prompt_placeholders();

/// Fails on an empty (after trimming) question or an empty role definition
/// or output format. `rendered` is byte-stable for identical inputs and ends
/// with the question.
Result<PromptBundle> build_prompt(BackgroundInfo background,
                                  ModalityBlock speech, ModalityBlock gesture,
                                  std::string question,
                                  const PromptTemplate& prompt_template);

/// Re-renders `bundle` with extra text (conversation history) placed after
/// the background section.
std::string render_prompt(const PromptBundle& bundle,
                          const PromptTemplate& prompt_template,
                          std::string_view history_section = {});

/// Background text and annotation defaults, as stored in a JSON document
/// with "background", "speech" and "gesture" objects.
struct PromptContent {
  BackgroundInfo background;
  ModalityBlock speech;
  ModalityBlock gesture;
};

Result<PromptContent> load_prompt_content(std::string_view json_text,
                                          const FillerLibrary& fillers,
                                          const GestureLibrary& gestures);

}  // namespace exprmark
