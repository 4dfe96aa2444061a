// Copyright 2026 The ZSIE Authors.
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

#include "zsie/schema.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "json.hpp"
#include "zsie/json_util.h"

namespace zsie {

using nlohmann::json;

namespace {

constexpr std::string_view kX = "{X}";
constexpr std::string_view kY = "{Y}";

size_t CountOf(std::string_view text, std::string_view needle) {
  size_t n = 0;
  for (size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

// Placeholder shape a template must have for its owning type.
enum class Slot { kForbidden, kOptional, kRequired };

void CheckName(const std::string &name, const std::string &path,
               ValidationReport *report) {
  if (name.empty()) {
    report->push_back({path + ".name", "empty name"});
    return;
  }
  if (name == kNegativeLabel) {
    report->push_back({path + ".name", "name NEGATIVE is reserved"});
  }
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}') {
      report->push_back(
          {path + ".name", "name \"" + name + "\" is not an identifier"});
      return;
    }
  }
}

void CheckTemplates(const std::vector<Template> &templates, Slot x, Slot y,
                    const std::string &path, ValidationReport *report) {
  if (templates.empty()) {
    report->push_back({path + ".templates", "no templates"});
  }
  std::set<std::string> ids;
  for (size_t i = 0; i < templates.size(); ++i) {
    const Template &t = templates[i];
    std::string tpath = path + ".templates[" + std::to_string(i) + "]";
    if (t.id.empty()) {
      report->push_back({tpath + ".id", "empty template id"});
    } else if (!ids.insert(t.id).second) {
      report->push_back({tpath + ".id", "duplicate template id " + t.id});
    }
    if (t.text.empty()) {
      report->push_back({tpath + ".text", "empty template text"});
      continue;
    }
    size_t nx = CountOf(t.text, kX);
    size_t ny = CountOf(t.text, kY);
    if (nx > 1) report->push_back({tpath + ".text", "{X} appears more than once"});
    if (ny > 1) report->push_back({tpath + ".text", "{Y} appears more than once"});
    size_t braces = std::count(t.text.begin(), t.text.end(), '{') +
                    std::count(t.text.begin(), t.text.end(), '}');
    if (braces != 2 * (nx + ny)) {
      report->push_back({tpath + ".text", "stray brace outside {X}/{Y}"});
    }
    if (x == Slot::kRequired && nx == 0) {
      report->push_back({tpath + ".text", "template must contain {X}"});
    }
    if (x == Slot::kForbidden && nx > 0) {
      report->push_back({tpath + ".text", "template must not contain {X}"});
    }
    if (y == Slot::kRequired && ny == 0) {
      report->push_back({tpath + ".text", "template must contain {Y}"});
    }
    if (y == Slot::kForbidden && ny > 0) {
      report->push_back({tpath + ".text", "template must not contain {Y}"});
    }
  }
}

void CheckEntityRef(const Schema &schema, const std::string &name,
                    const std::string &path, ValidationReport *report) {
  if (schema.FindEntity(name) == nullptr) {
    report->push_back({path, "unresolved entity type " + name});
  }
}

template <typename T>
const T *FindByName(const std::vector<T> &defs, std::string_view name) {
  for (const T &d : defs) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

}  // namespace

bool Template::has_x() const { return text.find(kX) != std::string::npos; }
bool Template::has_y() const { return text.find(kY) != std::string::npos; }

std::vector<std::string> Template::placeholders() const {
  size_t x = text.find(kX);
  size_t y = text.find(kY);
  std::vector<std::pair<size_t, std::string>> found;
  if (x != std::string::npos) found.emplace_back(x, "X");
  if (y != std::string::npos) found.emplace_back(y, "Y");
  std::sort(found.begin(), found.end());
  std::vector<std::string> out;
  for (auto &f : found) out.push_back(f.second);
  return out;
}

bool RelationTypeDef::Allows(std::string_view left,
                             std::string_view right) const {
  for (const TypePair &p : allowed_pairs) {
    if (p.left == left && p.right == right) return true;
  }
  return false;
}

bool ArgumentRoleDef::AcceptsFiller(std::string_view entity_type) const {
  return std::find(allowed_filler_types.begin(), allowed_filler_types.end(),
                   entity_type) != allowed_filler_types.end();
}

std::string_view TriggerModeName(TriggerMode mode) {
  return mode == TriggerMode::kTriggerSpan ? "trigger-span" : "sentence-level";
}

std::optional<TriggerMode> ParseTriggerMode(std::string_view name) {
  if (name == "sentence-level") return TriggerMode::kSentenceLevel;
  if (name == "trigger-span") return TriggerMode::kTriggerSpan;
  return std::nullopt;
}

const EntityTypeDef *Schema::FindEntity(std::string_view name) const {
  return FindByName(entity_types, name);
}

const RelationTypeDef *Schema::FindRelation(std::string_view name) const {
  return FindByName(relation_types, name);
}

const EventTypeDef *Schema::FindEvent(std::string_view name) const {
  return FindByName(event_types, name);
}

const ArgumentRoleDef *Schema::FindRole(std::string_view event,
                                        std::string_view role) const {
  for (const ArgumentRoleDef &r : argument_roles) {
    if (r.owning_event == event && r.name == role) return &r;
  }
  return nullptr;
}

std::vector<const ArgumentRoleDef *> Schema::RolesOf(
    std::string_view event) const {
  std::vector<const ArgumentRoleDef *> roles;
  for (const ArgumentRoleDef &r : argument_roles) {
    if (r.owning_event == event) roles.push_back(&r);
  }
  return roles;
}

bool Schema::empty() const {
  return entity_types.empty() && relation_types.empty() &&
         event_types.empty() && argument_roles.empty();
}

std::string ToString(const Violation &v) { return v.path + ": " + v.message; }

ValidationReport validate_schema(const Schema &schema) {
  ValidationReport report;

  std::set<std::string> seen;
  for (size_t i = 0; i < schema.entity_types.size(); ++i) {
    const EntityTypeDef &e = schema.entity_types[i];
    std::string path = "entity_types[" + std::to_string(i) + "]";
    CheckName(e.name, path, &report);
    if (!e.name.empty() && !seen.insert(e.name).second) {
      report.push_back({path + ".name", "duplicate entity type " + e.name});
    }
    CheckTemplates(e.templates, Slot::kRequired, Slot::kForbidden, path,
                   &report);
  }

  seen.clear();
  for (size_t i = 0; i < schema.relation_types.size(); ++i) {
    const RelationTypeDef &r = schema.relation_types[i];
    std::string path = "relation_types[" + std::to_string(i) + "]";
    CheckName(r.name, path, &report);
    if (!r.name.empty() && !seen.insert(r.name).second) {
      report.push_back({path + ".name", "duplicate relation type " + r.name});
    }
    CheckTemplates(r.templates, Slot::kRequired, Slot::kRequired, path,
                   &report);
    if (r.allowed_pairs.empty()) {
      report.push_back({path + ".allowed_pairs", "no allowed type pairs"});
    }
    for (size_t j = 0; j < r.allowed_pairs.size(); ++j) {
      std::string ppath = path + ".allowed_pairs[" + std::to_string(j) + "]";
      CheckEntityRef(schema, r.allowed_pairs[j].left, ppath + ".left",
                     &report);
      CheckEntityRef(schema, r.allowed_pairs[j].right, ppath + ".right",
                     &report);
    }
  }

  seen.clear();
  for (size_t i = 0; i < schema.event_types.size(); ++i) {
    const EventTypeDef &e = schema.event_types[i];
    std::string path = "event_types[" + std::to_string(i) + "]";
    CheckName(e.name, path, &report);
    if (!e.name.empty() && !seen.insert(e.name).second) {
      report.push_back({path + ".name", "duplicate event type " + e.name});
    }
    Slot x = e.trigger_mode == TriggerMode::kTriggerSpan ? Slot::kRequired
                                                         : Slot::kForbidden;
    CheckTemplates(e.templates, x, Slot::kForbidden, path, &report);
  }

  std::set<std::pair<std::string, std::string>> roles;
  for (size_t i = 0; i < schema.argument_roles.size(); ++i) {
    const ArgumentRoleDef &r = schema.argument_roles[i];
    std::string path = "argument_roles[" + std::to_string(i) + "]";
    CheckName(r.name, path, &report);
    if (schema.FindEvent(r.owning_event) == nullptr) {
      report.push_back(
          {path + ".owning_event", "unresolved event type " + r.owning_event});
    }
    if (!r.name.empty() && !roles.emplace(r.owning_event, r.name).second) {
      report.push_back({path + ".name", "duplicate role " + r.name +
                                            " for event " + r.owning_event});
    }
    CheckTemplates(r.templates, Slot::kOptional, Slot::kRequired, path,
                   &report);
    if (r.allowed_filler_types.empty()) {
      report.push_back({path + ".allowed_filler_types", "no filler types"});
    }
    for (size_t j = 0; j < r.allowed_filler_types.size(); ++j) {
      CheckEntityRef(schema, r.allowed_filler_types[j],
                     path + ".allowed_filler_types[" + std::to_string(j) + "]",
                     &report);
    }
  }

  if (schema.version < 1) {
    report.push_back({"version", "version must be positive"});
  }
  return report;
}

SchemaValidationError::SchemaValidationError(ValidationReport report)
    : ValidationError(
          [&] {
            std::string s = "invalid schema";
            for (const Violation &v : report) s += "; " + ToString(v);
            return s;
          }(),
          [&] {
            std::vector<std::string> d;
            for (const Violation &v : report) d.push_back(ToString(v));
            return d;
          }()),
      report_(std::move(report)) {}

namespace {

std::vector<Template> TemplatesFromJson(const json &j,
                                        const std::string &path) {
  std::vector<Template> out;
  const json &list = RequireArray(j, "templates", path);
  for (size_t i = 0; i < list.size(); ++i) {
    const json &t = list[i];
    std::string tpath = path + ".templates[" + std::to_string(i) + "]";
    Template tmpl;
    if (t.is_string()) {
      tmpl.text = t.get<std::string>();
    } else {
      RejectUnknownKeys(t, {"id", "text"}, tpath);
      tmpl.text = RequireString(t, "text", tpath);
      tmpl.id = OptionalString(t, "id", tpath).value_or("");
    }
    if (tmpl.id.empty()) tmpl.id = "t" + std::to_string(i);
    out.push_back(std::move(tmpl));
  }
  return out;
}

json TemplatesToJson(const std::vector<Template> &templates) {
  json list = json::array();
  for (const Template &t : templates) {
    list.push_back({{"id", t.id}, {"text", t.text}});
  }
  return list;
}

std::vector<std::string> StringList(const json &j, const char *key,
                                    const std::string &path) {
  std::vector<std::string> out;
  const json &list = RequireArray(j, key, path);
  for (size_t i = 0; i < list.size(); ++i) {
    if (!list[i].is_string()) {
      throw ParseError(path + "." + key + "[" + std::to_string(i) +
                       "]: expected string");
    }
    out.push_back(list[i].get<std::string>());
  }
  return out;
}

}  // namespace

Schema load_schema(std::string_view source) {
  json doc = ParseJson(source);
  if (!doc.is_object()) throw ParseError("schema: expected a JSON object");
  RejectUnknownKeys(doc,
                    {"version", "entity_types", "relation_types",
                     "event_types", "argument_roles"},
                    "schema");

  Schema schema;
  if (doc.contains("version")) {
    if (!doc["version"].is_number_integer()) {
      throw ParseError("schema.version: expected integer");
    }
    schema.version = doc["version"].get<long>();
  }

  auto list = [&](const char *key) -> json {
    if (!doc.contains(key)) return json::array();
    if (!doc[key].is_array()) {
      throw ParseError(std::string("schema.") + key + ": expected array");
    }
    return doc[key];
  };

  json entities = list("entity_types");
  for (size_t i = 0; i < entities.size(); ++i) {
    std::string path = "entity_types[" + std::to_string(i) + "]";
    const json &e = RequireObject(entities[i], path);
    RejectUnknownKeys(e, {"name", "templates"}, path);
    schema.entity_types.push_back(
        {RequireString(e, "name", path), TemplatesFromJson(e, path)});
  }

  json relations = list("relation_types");
  for (size_t i = 0; i < relations.size(); ++i) {
    std::string path = "relation_types[" + std::to_string(i) + "]";
    const json &r = RequireObject(relations[i], path);
    RejectUnknownKeys(r, {"name", "templates", "allowed_pairs"}, path);
    RelationTypeDef def;
    def.name = RequireString(r, "name", path);
    def.templates = TemplatesFromJson(r, path);
    const json &pairs = RequireArray(r, "allowed_pairs", path);
    for (size_t j = 0; j < pairs.size(); ++j) {
      std::string ppath = path + ".allowed_pairs[" + std::to_string(j) + "]";
      const json &p = RequireObject(pairs[j], ppath);
      RejectUnknownKeys(p, {"left", "right"}, ppath);
      def.allowed_pairs.push_back(
          {RequireString(p, "left", ppath), RequireString(p, "right", ppath)});
    }
    schema.relation_types.push_back(std::move(def));
  }

  json events = list("event_types");
  for (size_t i = 0; i < events.size(); ++i) {
    std::string path = "event_types[" + std::to_string(i) + "]";
    const json &e = RequireObject(events[i], path);
    RejectUnknownKeys(e, {"name", "templates", "trigger_mode"}, path);
    EventTypeDef def;
    def.name = RequireString(e, "name", path);
    def.templates = TemplatesFromJson(e, path);
    if (auto mode = OptionalString(e, "trigger_mode", path)) {
      auto parsed = ParseTriggerMode(*mode);
      if (!parsed) {
        throw ParseError(path + ".trigger_mode: unknown mode \"" + *mode +
                         "\"");
      }
      def.trigger_mode = *parsed;
    }
    schema.event_types.push_back(std::move(def));
  }

  json roles = list("argument_roles");
  for (size_t i = 0; i < roles.size(); ++i) {
    std::string path = "argument_roles[" + std::to_string(i) + "]";
    const json &r = RequireObject(roles[i], path);
    RejectUnknownKeys(
        r, {"name", "owning_event", "templates", "allowed_filler_types"},
        path);
    ArgumentRoleDef def;
    def.name = RequireString(r, "name", path);
    def.owning_event = RequireString(r, "owning_event", path);
    def.templates = TemplatesFromJson(r, path);
    def.allowed_filler_types = StringList(r, "allowed_filler_types", path);
    schema.argument_roles.push_back(std::move(def));
  }

  ValidationReport report = validate_schema(schema);
  if (!report.empty()) throw SchemaValidationError(std::move(report));
  return schema;
}

json SchemaToJson(const Schema &schema) {
  json doc = json::object();
  doc["version"] = schema.version;

  json entities = json::array();
  for (const EntityTypeDef &e : schema.entity_types) {
    entities.push_back(
        {{"name", e.name}, {"templates", TemplatesToJson(e.templates)}});
  }
  doc["entity_types"] = std::move(entities);

  json relations = json::array();
  for (const RelationTypeDef &r : schema.relation_types) {
    json pairs = json::array();
    for (const TypePair &p : r.allowed_pairs) {
      pairs.push_back({{"left", p.left}, {"right", p.right}});
    }
    relations.push_back({{"name", r.name},
                         {"templates", TemplatesToJson(r.templates)},
                         {"allowed_pairs", std::move(pairs)}});
  }
  doc["relation_types"] = std::move(relations);

  json events = json::array();
  for (const EventTypeDef &e : schema.event_types) {
    events.push_back({{"name", e.name},
                      {"trigger_mode", std::string(TriggerModeName(e.trigger_mode))},
                      {"templates", TemplatesToJson(e.templates)}});
  }
  doc["event_types"] = std::move(events);

  json roles = json::array();
  for (const ArgumentRoleDef &r : schema.argument_roles) {
    roles.push_back({{"name", r.name},
                     {"owning_event", r.owning_event},
                     {"allowed_filler_types", r.allowed_filler_types},
                     {"templates", TemplatesToJson(r.templates)}});
  }
  doc["argument_roles"] = std::move(roles);
  return doc;
}

std::string save_schema(const Schema &schema) {
  return SchemaToJson(schema).dump(2) + "\n";
}

}  // namespace zsie
