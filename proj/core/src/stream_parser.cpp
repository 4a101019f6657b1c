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

#include "exprmark/stream_parser.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "exprmark/utf8.hpp"

namespace exprmark {
namespace {

struct CharRef {
  std::string_view spelling;
  char value;
};
constexpr std::array<CharRef, 3> kCharRefs = {
    {{"&lt;", '<'}, {"&gt;", '>'}, {"&amp;", '&'}}};

bool is_alpha(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}
bool is_name_char(char c) {
  return is_alpha(c) || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
         c == ':';
}
bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

struct RawAttribute {
  std::string_view name;
  std::string_view value;
};

struct RawTag {
  bool closing = false;
  bool self_closing = false;
  std::string_view name;
  std::vector<RawAttribute> attributes;
};

// Splits one `<...>` candidate into name and attributes. The candidate holds
// no '<' or '>' besides its delimiters.
std::optional<RawTag> split_tag(std::string_view tag) {
  RawTag raw;
  std::size_t pos = 1;
  const std::size_t end = tag.size() - 1;  // index of '>'
  const auto skip_space = [&] {
    const std::size_t start = pos;
    while (pos < end && is_space(tag[pos])) ++pos;
    return pos != start;
  };
  const auto read_name = [&]() -> std::string_view {
    const std::size_t start = pos;
    if (pos < end && is_alpha(tag[pos])) {
      ++pos;
      while (pos < end && is_name_char(tag[pos])) ++pos;
    }
    return tag.substr(start, pos - start);
  };

  if (tag[pos] == '/') {
    raw.closing = true;
    ++pos;
  }
  raw.name = read_name();
  if (raw.name.empty()) return std::nullopt;
  if (raw.closing) {
    skip_space();
    return pos == end ? std::optional<RawTag>(raw) : std::nullopt;
  }
  while (true) {
    const bool spaced = skip_space();
    if (pos == end) return raw;
    if (tag[pos] == '/') {
      ++pos;
      skip_space();
      if (pos != end) return std::nullopt;
      raw.self_closing = true;
      return raw;
    }
    if (!spaced) return std::nullopt;
    RawAttribute attr;
    attr.name = read_name();
    if (attr.name.empty()) return std::nullopt;
    skip_space();
    if (pos >= end || tag[pos] != '=') return std::nullopt;
    ++pos;
    skip_space();
    if (pos >= end || tag[pos] != '"') return std::nullopt;
    const std::size_t close = tag.find('"', pos + 1);
    if (close == std::string_view::npos || close >= end) return std::nullopt;
    attr.value = tag.substr(pos + 1, close - pos - 1);
    pos = close + 1;
    raw.attributes.push_back(attr);
  }
}

std::string quote(std::string_view s) {
  return "\"" + utf8::sanitize_for_xml(s) + "\"";
}

}  // namespace

ParseOutput StreamParser::feed(std::string_view chunk) {
  if (finished_) throw std::logic_error("StreamParser::feed after finish");
  ParseOutput out;
  const std::size_t base = held_.empty() ? bytes_consumed_ : held_offset_;
  std::string buf = std::move(held_);
  held_.clear();
  buf.append(chunk);
  bytes_consumed_ += chunk.size();
  scan(std::move(buf), base, false, out);
  return out;
}

ParseOutput StreamParser::finish() {
  if (finished_) return {};
  ParseOutput out;
  std::string buf = std::move(held_);
  held_.clear();
  scan(std::move(buf), held_offset_, true, out);
  while (!prosody_stack_.empty()) {
    if (prosody_stack_.back()) {
      out.events.emplace_back(ProsodyClose{});
      diagnose(out, {Severity::Warning, bytes_consumed_, "unclosed-prosody",
                     "prosody element left open at end of input; closed"});
    }
    prosody_stack_.pop_back();
  }
  real_depth_ = 0;
  finished_ = true;
  return out;
}

void StreamParser::hold(std::string_view bytes, std::size_t offset,
                        bool is_tag) {
  held_.assign(bytes);
  held_offset_ = offset;
  held_is_tag_ = is_tag;
}

void StreamParser::diagnose(ParseOutput& out, ParseDiagnostic diagnostic) {
  diagnostics_.push_back(diagnostic);
  out.diagnostics.push_back(std::move(diagnostic));
}

void StreamParser::literal(ParseOutput& out, std::string_view text,
                           std::size_t offset, std::string code,
                           std::string message) {
  out.events.emplace_back(LiteralPassthrough{std::string(text)});
  diagnose(out, {Severity::Warning, offset, std::move(code),
                 std::move(message)});
}

void StreamParser::scan(std::string buf, std::size_t base, bool final,
                        ParseOutput& out) {
  const std::string_view view(buf);
  const std::size_t n = view.size();
  std::string text;
  const auto flush_text = [&] {
    if (!text.empty()) {
      out.events.emplace_back(TextRun{std::move(text)});
      text.clear();
    }
  };

  std::size_t i = 0;
  while (i < n) {
    const char c = view[i];

    if (c == '<') {
      if (i + 1 < n && !is_alpha(view[i + 1]) && view[i + 1] != '/') {
        text += '<';
        ++i;
        continue;
      }
      const std::size_t limit = std::min(n, i + kMaxTagBytes);
      std::size_t j = i + 1;
      while (j < limit && view[j] != '>' && view[j] != '<') ++j;
      if (j < limit && view[j] == '>') {
        flush_text();
        handle_tag(view.substr(i, j - i + 1), base + i, out);
        i = j + 1;
      } else if (j < limit) {
        flush_text();
        literal(out, view.substr(i, j - i), base + i, "unterminated-tag",
                "'<' starts a tag that never closes before the next '<'");
        i = j;
      } else if (limit - i >= kMaxTagBytes) {
        const std::size_t cut =
            i + utf8::floor_boundary(view.substr(i), kMaxTagBytes);
        flush_text();
        literal(out, view.substr(i, cut - i), base + i, "tag-too-long",
                "no '>' within " + std::to_string(kMaxTagBytes) +
                    " bytes of '<'; treated as text");
        i = cut;
      } else if (final) {
        flush_text();
        literal(out, view.substr(i), base + i, "unterminated-tag",
                "input ends inside a tag");
        i = n;
      } else {
        flush_text();
        hold(view.substr(i), base + i, true);
        return;
      }
      continue;
    }

    if (c == '&') {
      const std::string_view rest = view.substr(i);
      bool matched = false;
      bool partial = false;
      for (const auto& ref : kCharRefs) {
        if (rest.starts_with(ref.spelling)) {
          text += ref.value;
          i += ref.spelling.size();
          matched = true;
          break;
        }
        if (ref.spelling.starts_with(rest)) partial = true;
      }
      if (matched) continue;
      if (partial && !final) {
        flush_text();
        hold(rest, base + i, false);
        return;
      }
      text += '&';
      ++i;
      continue;
    }

    const auto byte = static_cast<unsigned char>(c);
    if (byte >= 0x80 && !final) {
      const std::size_t len = utf8::sequence_length(byte);
      if (len > 1 && i + len > n) {
        bool prefix = true;
        for (std::size_t k = i + 1; k < n; ++k) {
          prefix = prefix && utf8::is_continuation(
                                 static_cast<unsigned char>(view[k]));
        }
        if (prefix) {
          flush_text();
          hold(view.substr(i), base + i, false);
          return;
        }
      }
    }
    text += c;
    ++i;
  }
  flush_text();
}

void StreamParser::handle_tag(std::string_view tag, std::size_t offset,
                              ParseOutput& out) {
  const auto raw = split_tag(tag);
  if (!raw) {
    literal(out, tag, offset, "malformed-tag",
            "cannot parse tag " + std::string(tag));
    return;
  }
  const TagSchema* schema = find_tag_schema(raw->name);

  if (raw->closing) {
    if (schema == nullptr) {
      literal(out, tag, offset, "unknown-tag",
              "unknown closing tag " + quote(raw->name));
    } else if (!schema->is_container) {
      literal(out, tag, offset, "void-close-tag",
              quote(raw->name) + " takes no closing tag");
    } else if (prosody_stack_.empty()) {
      literal(out, tag, offset, "unbalanced-close",
              "</prosody> without a matching opening tag");
    } else {
      const bool real = prosody_stack_.back();
      prosody_stack_.pop_back();
      if (real) {
        --real_depth_;
        out.events.emplace_back(ProsodyClose{});
      } else {
        literal(out, tag, offset, "prosody-depth",
                "closes a prosody element that was nested too deeply");
      }
    }
    return;
  }

  if (schema == nullptr) {
    literal(out, tag, offset, "unknown-tag",
            "unknown tag " + quote(raw->name));
    return;
  }
  for (const auto& attr : raw->attributes) {
    if (schema->find_attribute(attr.name) == nullptr) {
      literal(out, tag, offset, "unknown-attribute",
              "tag " + quote(schema->name) + " has no attribute " +
                  quote(attr.name));
      return;
    }
  }
  std::map<std::string_view, std::string_view> values;
  for (const auto& attr : raw->attributes) {
    if (!values.emplace(attr.name, attr.value).second) {
      values[attr.name] = attr.value;
      diagnose(out, {Severity::Warning, offset, "duplicate-attribute",
                     "attribute " + quote(attr.name) +
                         " repeated; last value wins"});
    }
  }
  if (schema->is_container && raw->self_closing) {
    literal(out, tag, offset, "self-closing-container",
            quote(schema->name) + " must wrap text and cannot self-close");
    return;
  }
  for (const auto& attr : schema->attributes) {
    if (attr.required && !values.contains(attr.name)) {
      literal(out, tag, offset, "missing-attribute",
              "tag " + quote(schema->name) + " requires attribute " +
                  quote(attr.name));
      return;
    }
  }
  if (schema->is_container && real_depth_ >= kMaxSourceProsodyDepth) {
    prosody_stack_.push_back(false);
    literal(out, tag, offset, "prosody-depth",
            "prosody nested deeper than " +
                std::to_string(kMaxSourceProsodyDepth) + " levels");
    return;
  }

  std::vector<ParseDiagnostic> value_diagnostics;
  std::map<std::string_view, AttributeValue> normalized;
  bool ok = true;
  for (const auto& attr : schema->attributes) {
    const auto it = values.find(attr.name);
    if (it == values.end()) continue;
    auto value = normalize_attribute_value(it->second, attr.kind,
                                           value_diagnostics, offset);
    if (value) {
      normalized.emplace(attr.name, std::move(*value));
    } else {
      ok = false;
    }
  }
  for (auto& d : value_diagnostics) diagnose(out, std::move(d));
  if (!ok) {
    // The error diagnostic above accounts for the passthrough.
    out.events.emplace_back(LiteralPassthrough{std::string(tag)});
    return;
  }

  const auto get = [&](std::string_view name) -> const AttributeValue* {
    const auto it = normalized.find(name);
    return it == normalized.end() ? nullptr : &it->second;
  };
  if (schema->name == "break") {
    out.events.emplace_back(Break{std::get<int>(*get("time"))});
  } else if (schema->name == "filler") {
    out.events.emplace_back(Filler{std::get<FillerKind>(*get("type"))});
  } else if (schema->name == "bookmark") {
    out.events.emplace_back(Bookmark{std::get<std::string>(*get("mark"))});
  } else {
    ProsodyOpen open;
    if (const auto* v = get("rate")) open.rate_pct = std::get<int>(*v);
    if (const auto* v = get("volume")) open.volume = std::get<VolumeLevel>(*v);
    if (const auto* v = get("pitch")) open.pitch_pct = std::get<int>(*v);
    prosody_stack_.push_back(true);
    ++real_depth_;
    out.events.emplace_back(open);
  }
}

TaggedDocument parse_document(std::string_view source) {
  StreamParser parser;
  TaggedDocument doc;
  ParseOutput first = parser.feed(source);
  ParseOutput rest = parser.finish();
  append_events(doc.events, first.events);
  append_events(doc.events, rest.events);
  doc.diagnostics = parser.diagnostics();
  return doc;
}

}  // namespace exprmark
