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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "exprmark/markup.hpp"

namespace exprmark {

struct ParseOutput {
  std::vector<MarkupEvent> events;
  std::vector<ParseDiagnostic> diagnostics;
};

/// Incremental parser for the speech/gesture tag language.
///
/// Text is emitted as soon as it is unambiguous. A suffix that may still turn
/// into a tag (at most kMaxTagBytes, always starting with '<') is held back,
/// as is a trailing partial UTF-8 sequence or character reference. Feeding
/// any partition of a source and then calling finish() produces, once the
/// outputs are joined with append_events(), exactly parse_document(source),
/// diagnostics included.
///
/// Grammar: `<name attr="value" ...>` with optional whitespace around '=';
/// break, filler and bookmark are void (trailing '/' optional); prosody is a
/// container closed by `</prosody>`. Text runs decode &lt; &gt; &amp;.
/// Anything else degrades to a LiteralPassthrough plus a diagnostic.
class StreamParser {
 public:
  ParseOutput feed(std::string_view chunk);
  ParseOutput finish();

  /// Held-back bytes that may begin a tag; empty or starts with '<'.
  std::string_view pending_buffer() const {
    return held_is_tag_ ? std::string_view(held_) : std::string_view();
  }
  /// All bytes held back, including a partial character or reference.
  std::size_t held_bytes() const { return held_.size(); }
  std::size_t bytes_consumed() const { return bytes_consumed_; }
  /// Prosody elements opened and not yet closed (including suppressed ones).
  std::size_t open_prosody() const { return prosody_stack_.size(); }
  const std::vector<ParseDiagnostic>& diagnostics() const {
    return diagnostics_;
  }
  bool finished() const { return finished_; }

 private:
  void scan(std::string buf, std::size_t base, bool final, ParseOutput& out);
  void handle_tag(std::string_view tag, std::size_t offset, ParseOutput& out);
  void literal(ParseOutput& out, std::string_view text, std::size_t offset,
               std::string code, std::string message);
  void diagnose(ParseOutput& out, ParseDiagnostic diagnostic);
  void hold(std::string_view bytes, std::size_t offset, bool is_tag);

  std::string held_;
  std::size_t held_offset_ = 0;
  bool held_is_tag_ = false;
  std::size_t bytes_consumed_ = 0;
  // true = emitted ProsodyOpen; false = opener passed through for depth.
  std::vector<bool> prosody_stack_;
  std::size_t real_depth_ = 0;
  std::vector<ParseDiagnostic> diagnostics_;
  bool finished_ = false;
};

/// Whole-string parse. Never fails; malformed input becomes literal text
/// with diagnostics, and unclosed prosody is closed at end of input.
TaggedDocument parse_document(std::string_view source);

}  // namespace exprmark
