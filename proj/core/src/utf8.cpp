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

#include "exprmark/utf8.hpp"

namespace exprmark::utf8 {

std::size_t decode(std::string_view text, std::size_t pos, char32_t& out) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  const std::size_t len = sequence_length(lead);
  if (len == 0 || pos + len > text.size()) return 0;
  if (len == 1) {
    out = lead;
    return 1;
  }
  char32_t cp = lead & (0xFF >> (len + 1));
  for (std::size_t k = 1; k < len; ++k) {
    const unsigned char b = byte(pos + k);
    if (!is_continuation(b)) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  // Reject overlong forms, surrogates, and values past U+10FFFF.
  if ((len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
      (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
    return 0;
  }
  out = cp;
  return len;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::size_t count_code_points(std::string_view text) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp;
    const std::size_t len = decode(text, pos, cp);
    pos += len == 0 ? 1 : len;
    ++count;
  }
  return count;
}

std::string sanitize_for_xml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp;
    const std::size_t len = decode(text, pos, cp);
    const bool legal =
        len != 0 && (cp == 0x9 || cp == 0xA || cp == 0xD ||
                     (cp >= 0x20 && cp <= 0xD7FF) ||
                     (cp >= 0xE000 && cp <= 0xFFFD) || cp >= 0x10000);
    if (legal) {
      out.append(text.substr(pos, len));
      pos += len;
    } else {
      append(out, 0xFFFD);
      pos += len == 0 ? 1 : len;
    }
  }
  return out;
}

std::size_t floor_boundary(std::string_view text, std::size_t limit) {
  if (limit >= text.size()) return text.size();
  const auto at = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  std::size_t pos = limit;
  for (int back = 0; back < 3 && pos > 0 && is_continuation(at(pos)); ++back) {
    --pos;
  }
  // Only step back over a genuine lead byte whose sequence crosses `limit`;
  // stray continuation bytes are cut anywhere. Never return 0 for limit > 0.
  if (pos == 0 || pos == limit) return limit;
  const std::size_t len = sequence_length(at(pos));
  return len > limit - pos ? pos : limit;
}

}  // namespace exprmark::utf8
