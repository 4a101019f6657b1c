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

#include "exprmark/libraries.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace exprmark {
namespace {

using nlohmann::json;

std::string quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

Result<json> parse_config(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    return Result<json>::failure("configuration document is empty");
  }
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) {
      return Result<json>::failure(
          "configuration document must be a JSON object");
    }
    return doc;
  } catch (const json::parse_error& e) {
    return Result<json>::failure(std::string("invalid JSON: ") + e.what());
  }
}

Result<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Result<std::string>::failure("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_keys(const json& object, std::initializer_list<std::string_view> allowed,
                const std::string& where, std::vector<std::string>& errors) {
  for (const auto& [key, _] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      errors.push_back(where + ": unknown field " + quote(key));
    }
  }
}

std::optional<std::string> get_string(const json& object, const char* key,
                                      const std::string& where,
                                      std::vector<std::string>& errors) {
  if (!object.contains(key)) {
    errors.push_back(where + ": missing field " + quote(key));
    return std::nullopt;
  }
  const auto& value = object.at(key);
  if (!value.is_string()) {
    errors.push_back(where + "." + key + ": expected a string");
    return std::nullopt;
  }
  return value.get<std::string>();
}

std::optional<int> get_bounded_int(const json& object, const char* key, int lo,
                                   int hi, const std::string& where,
                                   std::vector<std::string>& errors) {
  const auto& value = object.at(key);
  if (!value.is_number_integer()) {
    errors.push_back(where + "." + key + ": expected an integer");
    return std::nullopt;
  }
  const auto v = value.get<std::int64_t>();
  if (v < lo || v > hi) {
    errors.push_back(where + "." + key + ": " + std::to_string(v) +
                     " outside [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
    return std::nullopt;
  }
  return static_cast<int>(v);
}

}  // namespace

std::string_view to_string(GestureCategory category) {
  switch (category) {
    case GestureCategory::Thinking: return "thinking";
    case GestureCategory::Emphasizing: return "emphasizing";
    case GestureCategory::Summarizing: return "summarizing";
  }
  return "thinking";
}

std::optional<GestureCategory> parse_gesture_category(std::string_view text) {
  for (auto category : kAllGestureCategories) {
    if (to_string(category) == text) return category;
  }
  return std::nullopt;
}

Result<FillerLibrary> FillerLibrary::from_entries(
    std::vector<FillerEntry> entries) {
  std::vector<std::string> errors;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const std::string where = "fillers[" + std::to_string(i) + "]";
    if (e.surface.empty()) errors.push_back(where + ": surface is empty");
    if (std::abs(e.render_rate_pct) > kMaxProsodyPercent) {
      errors.push_back(where + ": rate " + format_percent(e.render_rate_pct) +
                       " outside clamp bounds");
    }
    if (e.trailing_break_ms < 0 || e.trailing_break_ms > kMaxBreakMs) {
      errors.push_back(where + ": break " +
                       std::to_string(e.trailing_break_ms) +
                       "ms outside clamp bounds");
    }
  }
  for (FillerKind kind : kAllFillerKinds) {
    const bool covered =
        std::any_of(entries.begin(), entries.end(),
                    [&](const FillerEntry& e) { return e.kind == kind; });
    if (!covered) {
      errors.push_back("kind " + std::string(to_string(kind)) +
                       " has no entries");
    }
  }
  if (!errors.empty()) return Result<FillerLibrary>::failure(std::move(errors));
  FillerLibrary lib;
  lib.entries_ = std::move(entries);
  return lib;
}

std::vector<const FillerEntry*> FillerLibrary::entries_of(
    FillerKind kind) const {
  std::vector<const FillerEntry*> out;
  for (const auto& e : entries_) {
    if (e.kind == kind) out.push_back(&e);
  }
  return out;
}

Result<GestureLibrary> GestureLibrary::from_entries(
    std::vector<GestureEntry> entries,
    std::map<std::string, GestureCategory> marks) {
  std::vector<std::string> errors;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const std::string where = "gestures[" + std::to_string(i) + "]";
    if (e.id.empty()) {
      errors.push_back(where + ": id is empty");
    } else if (!ids.insert(e.id).second) {
      errors.push_back(where + ": duplicate id " + quote(e.id));
    }
    if (e.animation_clip.empty()) errors.push_back(where + ": clip is empty");
  }
  for (auto category : kAllGestureCategories) {
    const bool covered =
        std::any_of(entries.begin(), entries.end(),
                    [&](const GestureEntry& e) { return e.category == category; });
    if (!covered) {
      errors.push_back("category " + std::string(to_string(category)) +
                       " has no entries");
    }
  }
  for (const auto& [mark, _] : marks) {
    if (!is_identifier(mark)) {
      errors.push_back("marks: " + quote(mark) + " is not an identifier");
    }
  }
  if (!errors.empty()) return Result<GestureLibrary>::failure(std::move(errors));
  GestureLibrary lib;
  lib.entries_ = std::move(entries);
  lib.marks_ = std::move(marks);
  return lib;
}

std::vector<const GestureEntry*> GestureLibrary::entries_of(
    GestureCategory category) const {
  std::vector<const GestureEntry*> out;
  for (const auto& e : entries_) {
    if (e.category == category) out.push_back(&e);
  }
  return out;
}

std::optional<GestureCategory> GestureLibrary::resolve(
    std::string_view mark) const {
  const auto it = marks_.find(std::string(mark));
  if (it == marks_.end()) return std::nullopt;
  return it->second;
}

const GestureEntry* GestureLibrary::find(std::string_view id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

Result<FillerLibrary> load_filler_library(std::string_view json_text) {
  auto doc = parse_config(json_text);
  if (!doc) return Result<FillerLibrary>::failure(doc.errors());
  const json& root = doc.value();
  if (!root.contains("fillers") || !root.at("fillers").is_array()) {
    return Result<FillerLibrary>::failure(
        "\"fillers\" must be present and be an array");
  }
  std::vector<std::string> errors;
  std::vector<FillerEntry> entries;
  std::set<FillerKind> kinds_seen;
  const auto& items = root.at("fillers");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string where = "fillers[" + std::to_string(i) + "]";
    const auto& item = items[i];
    if (!item.is_object()) {
      errors.push_back(where + ": expected an object");
      continue;
    }
    const std::size_t before = errors.size();
    check_keys(item, {"kind", "surface", "rate_pct", "volume", "break_ms"},
               where, errors);
    FillerEntry entry;
    if (auto kind = get_string(item, "kind", where, errors)) {
      if (auto parsed = parse_filler_kind(*kind)) {
        entry.kind = *parsed;
        kinds_seen.insert(*parsed);
      } else {
        errors.push_back(where + ".kind: unknown filler kind " + quote(*kind));
      }
    }
    if (auto surface = get_string(item, "surface", where, errors)) {
      if (surface->empty()) errors.push_back(where + ".surface: empty");
      entry.surface = *surface;
    }
    if (item.contains("rate_pct")) {
      if (auto v = get_bounded_int(item, "rate_pct", -kMaxProsodyPercent,
                                   kMaxProsodyPercent, where, errors)) {
        entry.render_rate_pct = *v;
      }
    }
    if (item.contains("volume")) {
      if (auto volume = get_string(item, "volume", where, errors)) {
        if (auto parsed = parse_volume_level(*volume)) {
          entry.render_volume = *parsed;
        } else {
          errors.push_back(where + ".volume: unknown volume " + quote(*volume));
        }
      }
    }
    if (item.contains("break_ms")) {
      if (auto v = get_bounded_int(item, "break_ms", 0, kMaxBreakMs, where,
                                   errors)) {
        entry.trailing_break_ms = *v;
      }
    }
    if (errors.size() == before) entries.push_back(std::move(entry));
  }
  for (FillerKind kind : kAllFillerKinds) {
    if (!kinds_seen.contains(kind)) {
      errors.push_back("kind " + std::string(to_string(kind)) +
                       " has no entries");
    }
  }
  if (!errors.empty()) return Result<FillerLibrary>::failure(std::move(errors));
  return FillerLibrary::from_entries(std::move(entries));
}

Result<GestureLibrary> load_gesture_library(std::string_view json_text) {
  auto doc = parse_config(json_text);
  if (!doc) return Result<GestureLibrary>::failure(doc.errors());
  const json& root = doc.value();
  std::vector<std::string> errors;
  if (!root.contains("gestures") || !root.at("gestures").is_array()) {
    errors.emplace_back("\"gestures\" must be present and be an array");
  }
  if (!root.contains("marks") || !root.at("marks").is_object()) {
    errors.emplace_back("\"marks\" must be present and be an object");
  }
  if (!errors.empty()) return Result<GestureLibrary>::failure(std::move(errors));

  std::vector<GestureEntry> entries;
  std::set<std::string> ids_seen;
  std::set<GestureCategory> categories_seen;
  const auto& items = root.at("gestures");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string where = "gestures[" + std::to_string(i) + "]";
    const auto& item = items[i];
    if (!item.is_object()) {
      errors.push_back(where + ": expected an object");
      continue;
    }
    const std::size_t before = errors.size();
    check_keys(item, {"id", "category", "clip"}, where, errors);
    GestureEntry entry;
    if (auto id = get_string(item, "id", where, errors)) {
      if (id->empty()) {
        errors.push_back(where + ".id: empty");
      } else if (!ids_seen.insert(*id).second) {
        errors.push_back(where + ": duplicate id " + quote(*id));
      }
      entry.id = *id;
    }
    if (auto category = get_string(item, "category", where, errors)) {
      if (auto parsed = parse_gesture_category(*category)) {
        entry.category = *parsed;
        categories_seen.insert(*parsed);
      } else {
        errors.push_back(where + ".category: unknown category " +
                         quote(*category));
      }
    }
    if (auto clip = get_string(item, "clip", where, errors)) {
      entry.animation_clip = *clip;
    }
    if (errors.size() == before) entries.push_back(std::move(entry));
  }
  std::map<std::string, GestureCategory> marks;
  for (const auto& [mark, value] : root.at("marks").items()) {
    const std::string where = "marks." + mark;
    if (!is_identifier(mark)) {
      errors.push_back("marks: " + quote(mark) + " is not an identifier");
    }
    if (!value.is_string()) {
      errors.push_back(where + ": expected a category name");
      continue;
    }
    if (auto parsed = parse_gesture_category(value.get<std::string>())) {
      marks.emplace(mark, *parsed);
    } else {
      errors.push_back(where + ": unknown category " +
                       quote(value.get<std::string>()));
    }
  }
  for (auto category : kAllGestureCategories) {
    if (!categories_seen.contains(category)) {
      errors.push_back("category " + std::string(to_string(category)) +
                       " has no entries");
    }
  }
  if (!errors.empty()) return Result<GestureLibrary>::failure(std::move(errors));
  return GestureLibrary::from_entries(std::move(entries), std::move(marks));
}

Result<FillerLibrary> load_filler_library_file(
    const std::filesystem::path& path) {
  auto text = read_file(path);
  if (!text) return Result<FillerLibrary>::failure(text.errors());
  return load_filler_library(text.value());
}

Result<GestureLibrary> load_gesture_library_file(
    const std::filesystem::path& path) {
  auto text = read_file(path);
  if (!text) return Result<GestureLibrary>::failure(text.errors());
  return load_gesture_library(text.value());
}

std::uint64_t splitmix64_at(std::uint64_t stream_seed, std::uint64_t index) {
  std::uint64_t z = stream_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t uniform_below(std::uint64_t stream_seed, std::uint64_t& position,
                            std::uint64_t bound) {
  if (bound <= 1) {
    ++position;
    return 0;
  }
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = splitmix64_at(stream_seed, position++);
    if (r >= threshold) return r % bound;
  }
}

const FillerEntry& select_filler(const FillerLibrary& library, FillerKind kind,
                                 SelectionState& state) {
  const auto candidates = library.entries_of(kind);
  const auto pick =
      uniform_below(state.seed_, state.filler_position_, candidates.size());
  return *candidates[pick];
}

Result<GestureEntry> select_gesture(const GestureLibrary& library,
                                    std::string_view mark,
                                    SelectionState& state) {
  const auto category = library.resolve(mark);
  if (!category) {
    return Result<GestureEntry>::failure("unknown gesture mark " +
                                         quote(mark));
  }
  auto candidates = library.entries_of(*category);
  auto& last = state.last_selected_[static_cast<std::size_t>(*category)];
  if (candidates.size() >= 2 && last) {
    std::erase_if(candidates,
                  [&](const GestureEntry* e) { return e->id == *last; });
  }
  const auto pick =
      uniform_below(state.seed_ ^ SelectionState::kGestureStreamSalt,
                    state.gesture_position_, candidates.size());
  last = candidates[pick]->id;
  return *candidates[pick];
}

}  // namespace exprmark
