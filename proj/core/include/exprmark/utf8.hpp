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
#include <cstdint>
#include <string>
#include <string_view>

namespace exprmark::utf8 {

inline bool is_continuation(unsigned char byte) { return (byte & 0xC0) == 0x80; }

/// Expected length of the sequence introduced by `lead`, or 0 when `lead`
/// cannot start a sequence.
inline std::size_t sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if (lead >= 0xC2 && lead <= 0xDF) return 2;
  if (lead >= 0xE0 && lead <= 0xEF) return 3;
  if (lead >= 0xF0 && lead <= 0xF4) return 4;
  return 0;
}

/// Decodes one well-formed scalar value at `text[pos]`. Returns the number of
/// bytes consumed, or 0 for an ill-formed or truncated sequence.
std::size_t decode(std::string_view text, std::size_t pos, char32_t& out);

void append(std::string& out, char32_t cp);

/// Code points in `text`; every byte that does not begin a well-formed
/// sequence counts as one.
std::size_t count_code_points(std::string_view text);

/// Replaces ill-formed UTF-8 and characters XML 1.0 forbids with U+FFFD.
std::string sanitize_for_xml(std::string_view text);

/// Largest position <= `limit` that does not split a sequence.
std::size_t floor_boundary(std::string_view text, std::size_t limit);

}  // namespace exprmark::utf8
