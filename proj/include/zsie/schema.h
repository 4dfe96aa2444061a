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

#ifndef ZSIE_SCHEMA_H_
#define ZSIE_SCHEMA_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "zsie/errors.h"

namespace zsie {

// Label assigned to candidates for which no type is entailed. Reserved: no
// schema type may use it as a name.
inline constexpr std::string_view kNegativeLabel = "NEGATIVE";

// A verbalization template. The text is a natural-language sentence with
// zero, one or two placeholders spelled literally "{X}" and "{Y}". There is
// no escaping: any other brace is rejected by validation.
struct Template {
  std::string id;
  std::string text;

  bool has_x() const;
  bool has_y() const;

  // Placeholders in order of appearance, e.g. {"X", "Y"}.
  std::vector<std::string> placeholders() const;

  bool operator==(const Template &) const = default;
};

struct EntityTypeDef {
  std::string name;
  std::vector<Template> templates;

  bool operator==(const EntityTypeDef &) const = default;
};

// Directional (left, right) entity type constraint of a relation.
struct TypePair {
  std::string left;
  std::string right;

  bool operator==(const TypePair &) const = default;
};

struct RelationTypeDef {
  std::string name;
  std::vector<Template> templates;
  std::vector<TypePair> allowed_pairs;

  bool Allows(std::string_view left, std::string_view right) const;

  bool operator==(const RelationTypeDef &) const = default;
};

enum class TriggerMode { kSentenceLevel, kTriggerSpan };

std::string_view TriggerModeName(TriggerMode mode);
std::optional<TriggerMode> ParseTriggerMode(std::string_view name);

struct EventTypeDef {
  std::string name;
  std::vector<Template> templates;
  TriggerMode trigger_mode = TriggerMode::kSentenceLevel;

  bool operator==(const EventTypeDef &) const = default;
};

struct ArgumentRoleDef {
  std::string name;
  std::string owning_event;
  std::vector<Template> templates;
  std::vector<std::string> allowed_filler_types;

  bool AcceptsFiller(std::string_view entity_type) const;

  bool operator==(const ArgumentRoleDef &) const = default;
};

// Immutable snapshot of the extraction schema. Declaration order of types
// and templates is significant: it breaks ties during inference.
struct Schema {
  std::vector<EntityTypeDef> entity_types;
  std::vector<RelationTypeDef> relation_types;
  std::vector<EventTypeDef> event_types;
  std::vector<ArgumentRoleDef> argument_roles;
  long version = 1;

  const EntityTypeDef *FindEntity(std::string_view name) const;
  const RelationTypeDef *FindRelation(std::string_view name) const;
  const EventTypeDef *FindEvent(std::string_view name) const;
  const ArgumentRoleDef *FindRole(std::string_view event,
                                  std::string_view role) const;

  // Roles declared for `event`, in declaration order.
  std::vector<const ArgumentRoleDef *> RolesOf(std::string_view event) const;

  bool empty() const;

  bool operator==(const Schema &) const = default;
};

struct Violation {
  std::string path;     // e.g. "relation_types[0].allowed_pairs[0].right"
  std::string message;  // e.g. "unresolved entity type DATE"

  bool operator==(const Violation &) const = default;
};

using ValidationReport = std::vector<Violation>;

std::string ToString(const Violation &v);

// Returns every invariant violation; an empty report means valid.
ValidationReport validate_schema(const Schema &schema);

// Thrown by load_schema when the document parses but is not a valid schema.
class SchemaValidationError : public ValidationError {
 public:
  explicit SchemaValidationError(ValidationReport report);

  const ValidationReport &report() const { return report_; }

 private:
  ValidationReport report_;
};

// Parses the JSON schema file format. Throws ParseError or
// SchemaValidationError.
Schema load_schema(std::string_view source);

// Serializes to the JSON schema file format (pretty printed, stable key
// order).
std::string save_schema(const Schema &schema);

// JSON document form of save_schema.
nlohmann::json SchemaToJson(const Schema &schema);

}  // namespace zsie

#endif  // ZSIE_SCHEMA_H_
