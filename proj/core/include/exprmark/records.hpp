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

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "exprmark/markup.hpp"
#include "exprmark/pipeline.hpp"
#include "exprmark/ssml_compiler.hpp"
#include "exprmark/timing.hpp"

namespace exprmark {

// Structured records shared by the CLI and the session transcript. Every
// record carries a "record" field naming its kind.

nlohmann::json event_record(const MarkupEvent& event);
nlohmann::json diagnostic_record(const ParseDiagnostic& diagnostic);
nlohmann::json cue_record(const GestureCue& cue);
nlohmann::json stamp_record(const TimelineStamp& stamp,
                            const MarkupEvent& event);
nlohmann::json segment_record(const OutputSegment& segment);
nlohmann::json summary_record(const SessionSummary& summary);

nlohmann::json events_json(std::span<const MarkupEvent> events);

/// Compact single-line serialization; ill-formed UTF-8 becomes U+FFFD.
std::string to_json_line(const nlohmann::json& record);

}  // namespace exprmark
