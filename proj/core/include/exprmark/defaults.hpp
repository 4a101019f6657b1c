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

#include <string_view>

#include "exprmark/libraries.hpp"
#include "exprmark/prompt_builder.hpp"

namespace exprmark {

// Bundled copies of the files under config/, compiled into the library.
std::string_view default_libraries_json();
std::string_view default_prompt_template_text();
std::string_view default_prompt_content_json();

const FillerLibrary& default_filler_library();
const GestureLibrary& default_gesture_library();
const PromptTemplate& default_prompt_template();
/// Prompt content grounded in the default libraries.
const PromptContent& default_prompt_content();

}  // namespace exprmark
