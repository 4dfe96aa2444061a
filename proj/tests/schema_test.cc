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

#include <gtest/gtest.h>

#include "zsie/errors.h"
#include "zsie/json_util.h"

namespace zsie {
namespace {

bool HasMessage(const ValidationReport &r, const std::string &text) {
  for (const Violation &v : r) {
    if (v.message.find(text) != std::string::npos) return true;
  }
  return false;
}

Schema PersonOnly() {
  Schema s;
  s.entity_types.push_back({"PERSON", {{"t0", "{X} is a person"}}});
  return s;
}

TEST(SchemaTest, SinglePersonTypeIsValid) {
  EXPECT_TRUE(validate_schema(PersonOnly()).empty());
}

TEST(SchemaTest, LoadsMinimalFile) {
  Schema s = load_schema(R"({"entity_types": [
      {"name": "PERSON", "templates": ["{X} is a person"]}]})");
  ASSERT_EQ(s.entity_types.size(), 1u);
  ASSERT_EQ(s.entity_types[0].templates.size(), 1u);
  EXPECT_EQ(s.entity_types[0].templates[0].id, "t0");
  EXPECT_EQ(s.entity_types[0].templates[0].text, "{X} is a person");
  EXPECT_EQ(s.version, 1);
}

TEST(SchemaTest, DanglingRelationTypeIsReported) {
  Schema s = PersonOnly();
  s.relation_types.push_back(
      {"per:date_of_death", {{"t0", "{X} died on {Y}"}}, {{"PERSON", "DATE"}}});
  ValidationReport r = validate_schema(s);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].message, "unresolved entity type DATE");
  EXPECT_EQ(r[0].path, "relation_types[0].allowed_pairs[0].right");
}

TEST(SchemaTest, TemplateShapeRules) {
  Schema s = PersonOnly();
  s.entity_types[0].templates.push_back({"t1", "{X} met {Y}"});
  s.entity_types[0].templates.push_back({"t2", "a person"});
  s.entity_types[0].templates.push_back({"t3", "{X} and {X}"});
  s.entity_types[0].templates.push_back({"t4", "{Z} is {X}"});
  ValidationReport r = validate_schema(s);
  EXPECT_TRUE(HasMessage(r, "must not contain {Y}"));
  EXPECT_TRUE(HasMessage(r, "must contain {X}"));
  EXPECT_TRUE(HasMessage(r, "more than once"));
  EXPECT_TRUE(HasMessage(r, "stray brace"));
}

TEST(SchemaTest, EventAndRoleSlots) {
  Schema s = PersonOnly();
  s.event_types.push_back({"Life.Die", {{"t0", "Someone died"}}, TriggerMode::kSentenceLevel});
  s.event_types.push_back({"Attack", {{"t0", "{X} is an attack"}}, TriggerMode::kTriggerSpan});
  s.argument_roles.push_back({"Victim", "Life.Die", {{"t0", "{Y} died"}}, {"PERSON"}});
  s.argument_roles.push_back({"Attacker", "Attack", {{"t0", "{Y} attacked in {X}"}}, {"PERSON"}});
  EXPECT_TRUE(validate_schema(s).empty());

  s.event_types[0].templates[0].text = "{X} died";
  s.argument_roles[0].templates[0].text = "Someone died";
  ValidationReport r = validate_schema(s);
  EXPECT_TRUE(HasMessage(r, "must not contain {X}"));
  EXPECT_TRUE(HasMessage(r, "must contain {Y}"));
}

TEST(SchemaTest, NamesAndReferences) {
  Schema s = PersonOnly();
  s.entity_types.push_back({"PERSON", {{"t0", "{X} is human"}}});
  s.entity_types.push_back({"NEGATIVE", {{"t0", "{X} is nothing"}}});
  s.entity_types.push_back({"TWO WORDS", {{"t0", "{X} is x"}}});
  s.argument_roles.push_back({"Victim", "Life.Die", {{"t0", "{Y} died"}}, {"PERSON"}});
  s.relation_types.push_back({"Knows", {{"t0", "{X} knows {Y}"}}, {}});
  s.version = 0;
  ValidationReport r = validate_schema(s);
  EXPECT_TRUE(HasMessage(r, "duplicate"));
  EXPECT_TRUE(HasMessage(r, "reserved"));
  EXPECT_TRUE(HasMessage(r, "not an identifier"));
  EXPECT_TRUE(HasMessage(r, "unresolved event type Life.Die"));
  EXPECT_FALSE(r.empty());
}

TEST(SchemaTest, RolesMayRepeatAcrossEvents) {
  Schema s = PersonOnly();
  for (const char *e : {"A", "B"}) {
    s.event_types.push_back({e, {{"t0", std::string(e) + " happened"}}, TriggerMode::kSentenceLevel});
    s.argument_roles.push_back({"Place", e, {{"t0", "It happened at {Y}"}}, {"PERSON"}});
  }
  EXPECT_TRUE(validate_schema(s).empty());
  s.argument_roles.push_back({"Place", "A", {{"t0", "At {Y}"}}, {"PERSON"}});
  EXPECT_FALSE(validate_schema(s).empty());
}

TEST(SchemaTest, SaveLoadRoundTrip) {
  Schema s = load_schema(ReadFile(ZSIE_DATA_DIR "/sample_schema.json"));
  EXPECT_EQ(s.entity_types.size(), 4u);
  EXPECT_EQ(s.RolesOf("Life.Die").size(), 3u);
  std::string saved = save_schema(s);
  EXPECT_EQ(load_schema(saved), s);
  EXPECT_EQ(save_schema(load_schema(saved)), saved);
}

TEST(SchemaTest, LoadErrors) {
  try {
    load_schema("{\n  \"entity_types\": [,]\n}");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(load_schema(R"({"entity_types": [], "colour": 1})"), ParseError);
  try {
    load_schema(R"({"relation_types": [{"name": "R", "templates": ["{X} r {Y}"],
        "allowed_pairs": [{"left": "A", "right": "B"}]}]})");
    FAIL();
  } catch (const SchemaValidationError &e) {
    EXPECT_EQ(e.report().size(), 2u);
  }
}

TEST(SchemaTest, Lookups) {
  Schema s = load_schema(ReadFile(ZSIE_DATA_DIR "/sample_schema.json"));
  ASSERT_NE(s.FindRelation("per:date_of_death"), nullptr);
  EXPECT_TRUE(s.FindRelation("per:date_of_death")->Allows("PERSON", "DATE"));
  EXPECT_FALSE(s.FindRelation("per:date_of_death")->Allows("DATE", "PERSON"));
  EXPECT_NE(s.FindRole("Life.Die", "Place"), nullptr);
  EXPECT_EQ(s.FindRole("Life.Die", "Nope"), nullptr);
  EXPECT_EQ(s.FindEntity("CITY"), nullptr);
  EXPECT_EQ(Template({"t", "{Y} then {X}"}).placeholders(),
            (std::vector<std::string>{"Y", "X"}));
}

}  // namespace
}  // namespace zsie
