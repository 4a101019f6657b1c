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

#include "exprmark/defaults.hpp"

#include <stdexcept>

#include "embedded_config.hpp"

namespace exprmark {
namespace {

template <class T>
T bundled(Result<T> result, const char* what) {
  if (!result) {
    throw std::logic_error(std::string("bundled ") + what +
                           " is invalid: " + result.error_text());
  }
  return std::move(result).value();
}

}  // namespace

std::string_view default_libraries_json() { return embedded::kLibrariesJson; }
std::string_view default_prompt_template_text() {
  return embedded::kPromptTemplate;
}
std::string_view default_prompt_content_json() {
  return embedded::kPromptContentJson;
}

const FillerLibrary& default_filler_library() {
  static const FillerLibrary library = bundled(
      load_filler_library(default_libraries_json()), "filler library");
  return library;
}

const GestureLibrary& default_gesture_library() {
  static const GestureLibrary library = bundled(
      load_gesture_library(default_libraries_json()), "gesture library");
  return library;
}

const PromptTemplate& default_prompt_template() {
  static const PromptTemplate t = bundled(
      PromptTemplate::parse(std::string(default_prompt_template_text())),
      "prompt template");
  return t;
}

const PromptContent& default_prompt_content() {
  static const PromptContent content =
      bundled(load_prompt_content(default_prompt_content_json(),
                                  default_filler_library(),
                                  default_gesture_library()),
              "prompt content");
  return content;
}

}  // namespace exprmark
