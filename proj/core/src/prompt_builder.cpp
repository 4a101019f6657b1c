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

#include "exprmark/prompt_builder.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "exprmark/stream_parser.hpp"

namespace exprmark {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string numbered(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += '\n';
    out += std::to_string(i + 1) + ". " + items[i];
  }
  return out;
}

// Tag names a parsed annotation actually uses.
std::set<std::string> tags_used(std::string_view annotation) {
  std::set<std::string> used;
  for (const auto& event : parse_document(annotation).events) {
    if (std::holds_alternative<Break>(event)) used.insert("break");
    if (std::holds_alternative<ProsodyOpen>(event)) used.insert("prosody");
    if (std::holds_alternative<Filler>(event)) used.insert("filler");
    if (std::holds_alternative<Bookmark>(event)) used.insert("bookmark");
  }
  return used;
}

}  // namespace

std::vector<TagSchema> tag_schemas_for(Modality modality) {
  std::vector<TagSchema> out;
  for (const auto& schema : tag_schemas()) {
    if (schema.modality == modality) out.push_back(schema);
  }
  return out;
}

std::string render_tag_set(std::span<const TagSchema> schemas) {
  std::string out;
  for (const auto& schema : schemas) {
    if (!out.empty()) out += '\n';
    out += "- ";
    out += schema.illustration;
    out += " : ";
    out += schema.purpose;
    out += ". Attributes: ";
    for (std::size_t i = 0; i < schema.attributes.size(); ++i) {
      const auto& attr = schema.attributes[i];
      if (i != 0) out += "; ";
      out += attr.name;
      out += attr.required ? " (required): " : " (optional): ";
      out += attr.domain;
    }
    out += '.';
  }
  return out;
}

std::string render_library_summary(const FillerLibrary& library) {
  std::string out;
  for (FillerKind kind : kAllFillerKinds) {
    if (!out.empty()) out += '\n';
    out += "- ";
    out += to_string(kind);
    out += ':';
    const auto entries = library.entries_of(kind);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      out += i == 0 ? " \"" : ", \"";
      out += entries[i]->surface;
      out += '"';
    }
  }
  return out;
}

std::string render_library_summary(const GestureLibrary& library) {
  std::string out;
  for (GestureCategory category : kAllGestureCategories) {
    if (!out.empty()) out += '\n';
    const auto entries = library.entries_of(category);
    out += "- ";
    out += to_string(category);
    out += " (" + std::to_string(entries.size()) +
           (entries.size() == 1 ? " variant)" : " variants)");
    std::vector<std::string_view> marks;
    for (const auto& [mark, target] : library.marks()) {
      if (target == category) marks.push_back(mark);
    }
    out += marks.empty() ? ", no marks" : ", marks:";
    for (std::size_t i = 0; i < marks.size(); ++i) {
      out += i == 0 ? " " : ", ";
      out += marks[i];
    }
  }
  return out;
}

Result<ModalityBlock> make_modality_block(Modality modality,
                                          std::string knowledge,
                                          std::vector<std::string> annotations,
                                          std::string library_description) {
  std::vector<std::string> errors;
  if (trim(knowledge).empty()) errors.emplace_back("knowledge is empty");
  std::set<std::string> covered;
  for (const auto& annotation : annotations) {
    covered.merge(tags_used(annotation));
  }
  const auto schemas = tag_schemas_for(modality);
  for (const auto& schema : schemas) {
    if (!covered.contains(std::string(schema.name))) {
      errors.push_back("no annotation uses the <" + std::string(schema.name) +
                       "> tag");
    }
  }
  if (!errors.empty()) return Result<ModalityBlock>::failure(std::move(errors));
  ModalityBlock block;
  block.knowledge = std::move(knowledge);
  block.annotations = std::move(annotations);
  block.tag_set_description = render_tag_set(schemas);
  block.library_description = std::move(library_description);
  return block;
}

const std::vector<std::string>& prompt_placeholders() {
  static const std::vector<std::string> names = {
      "role_definition",    "output_format",     "response_style",
      "scenario_description", "history",         "speech_knowledge",
      "speech_tag_set",     "speech_library",    "speech_annotations",
      "gesture_knowledge",  "gesture_tag_set",   "gesture_library",
      "gesture_annotations", "question"};
  return names;
}

Result<PromptTemplate> PromptTemplate::parse(std::string text) {
  std::vector<std::string> errors;
  const auto& known = prompt_placeholders();
  std::set<std::string> seen;
  std::size_t pos = 0;
  while ((pos = text.find("{{", pos)) != std::string::npos) {
    const auto end = text.find("}}", pos + 2);
    if (end == std::string::npos) {
      errors.emplace_back("unterminated placeholder at byte " +
                          std::to_string(pos));
      break;
    }
    const std::string name = text.substr(pos + 2, end - pos - 2);
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      errors.push_back("unknown placeholder {{" + name + "}}");
    }
    seen.insert(name);
    pos = end + 2;
  }
  for (const auto& name : known) {
    if (name != "history" && !seen.contains(name)) {
      errors.push_back("template lacks placeholder {{" + name + "}}");
    }
  }
  const auto question_at = text.rfind("{{question}}");
  if (question_at != std::string::npos &&
      !trim(std::string_view(text).substr(question_at + 12)).empty()) {
    errors.emplace_back("{{question}} must be the last thing in the template");
  }
  if (!errors.empty()) return Result<PromptTemplate>::failure(std::move(errors));
  PromptTemplate t;
  t.text_ = std::move(text);
  return t;
}

std::string PromptTemplate::render(
    const std::map<std::string, std::string>& values) const {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto open = text_.find("{{", pos);
    if (open == std::string::npos) {
      out.append(text_, pos);
      break;
    }
    const auto close = text_.find("}}", open + 2);
    out.append(text_, pos, open - pos);
    const auto it = values.find(text_.substr(open + 2, close - open - 2));
    if (it != values.end()) out += it->second;
    pos = close + 2;
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) {
    out.pop_back();
  }
  return out;
}

std::string render_prompt(const PromptBundle& bundle,
                          const PromptTemplate& prompt_template,
                          std::string_view history_section) {
  const auto& b = bundle.background;
  return prompt_template.render({
      {"role_definition", b.role_definition},
      {"output_format", b.output_format},
      {"response_style", b.response_style},
      {"scenario_description", b.scenario_description},
      {"history", std::string(history_section)},
      {"speech_knowledge", bundle.speech.knowledge},
      {"speech_tag_set", bundle.speech.tag_set_description},
      {"speech_library", bundle.speech.library_description},
      {"speech_annotations", numbered(bundle.speech.annotations)},
      {"gesture_knowledge", bundle.gesture.knowledge},
      {"gesture_tag_set", bundle.gesture.tag_set_description},
      {"gesture_library", bundle.gesture.library_description},
      {"gesture_annotations", numbered(bundle.gesture.annotations)},
      {"question", bundle.question},
  });
}

Result<PromptBundle> build_prompt(BackgroundInfo background,
                                  ModalityBlock speech, ModalityBlock gesture,
                                  std::string question,
                                  const PromptTemplate& prompt_template) {
  std::vector<std::string> errors;
  if (trim(question).empty()) errors.emplace_back("question is empty");
  if (trim(background.role_definition).empty()) {
    errors.emplace_back("background role definition is empty");
  }
  if (trim(background.output_format).empty()) {
    errors.emplace_back("background output format is empty");
  }
  if (!errors.empty()) return Result<PromptBundle>::failure(std::move(errors));

  PromptBundle bundle{std::move(background), std::move(speech),
                      std::move(gesture), std::string(trim(question)), {}};
  bundle.rendered = render_prompt(bundle, prompt_template);
  return bundle;
}

Result<PromptContent> load_prompt_content(std::string_view json_text,
                                          const FillerLibrary& fillers,
                                          const GestureLibrary& gestures) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    return Result<PromptContent>::failure(std::string("invalid JSON: ") +
                                          e.what());
  }
  std::vector<std::string> errors;
  const auto text_at = [&](const json& obj, const char* section,
                           const char* key) -> std::string {
    if (obj.is_object() && obj.contains(key) && obj.at(key).is_string()) {
      return obj.at(key).get<std::string>();
    }
    errors.push_back(std::string(section) + "." + key + ": expected a string");
    return {};
  };
  const auto list_at = [&](const json& obj, const char* section,
                           const char* key) {
    std::vector<std::string> out;
    if (obj.is_object() && obj.contains(key) && obj.at(key).is_array()) {
      for (const auto& item : obj.at(key)) {
        if (item.is_string()) {
          out.push_back(item.get<std::string>());
        } else {
          errors.push_back(std::string(section) + "." + key +
                           ": expected strings");
        }
      }
    } else {
      errors.push_back(std::string(section) + "." + key +
                       ": expected an array");
    }
    return out;
  };
  const json empty = json::object();
  const json& bg = doc.is_object() && doc.contains("background")
                       ? doc.at("background") : empty;
  const json& sp = doc.is_object() && doc.contains("speech")
                       ? doc.at("speech") : empty;
  const json& ge = doc.is_object() && doc.contains("gesture")
                       ? doc.at("gesture") : empty;

  PromptContent content;
  content.background = {text_at(bg, "background", "role_definition"),
                        text_at(bg, "background", "output_format"),
                        text_at(bg, "background", "response_style"),
                        text_at(bg, "background", "scenario_description")};
  std::string speech_knowledge = text_at(sp, "speech", "knowledge");
  auto speech_annotations = list_at(sp, "speech", "annotations");
  std::string gesture_knowledge = text_at(ge, "gesture", "knowledge");
  auto gesture_annotations = list_at(ge, "gesture", "annotations");
  if (!errors.empty()) return Result<PromptContent>::failure(std::move(errors));

  auto speech = make_modality_block(Modality::Speech, std::move(speech_knowledge),
                                    std::move(speech_annotations),
                                    render_library_summary(fillers));
  auto gesture = make_modality_block(
      Modality::Gesture, std::move(gesture_knowledge),
      std::move(gesture_annotations), render_library_summary(gestures));
  for (const auto& e : speech.errors()) errors.push_back("speech: " + e);
  for (const auto& e : gesture.errors()) errors.push_back("gesture: " + e);
  if (!errors.empty()) return Result<PromptContent>::failure(std::move(errors));
  content.speech = std::move(speech).value();
  content.gesture = std::move(gesture).value();
  return content;
}

}  // namespace exprmark
