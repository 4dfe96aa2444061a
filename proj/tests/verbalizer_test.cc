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

#include "zsie/verbalizer.h"

#include <gtest/gtest.h>

#include "zsie/errors.h"
#include "zsie/json_util.h"

namespace zsie {
namespace {

Candidate Ner(const std::string &text) {
  Candidate c;
  c.task = Task::kNer;
  c.primary = Span{0, 0, static_cast<int>(text.size()), text};
  return c;
}

TEST(InstantiateTest, Substitutes) {
  EXPECT_EQ(instantiate({"t0", "{X} is a person"}, Ner("John Smith")),
            "John Smith is a person");
  Candidate ee;
  ee.task = Task::kEe;
  EXPECT_EQ(instantiate({"t0", "Someone died"}, ee), "Someone died");
  Candidate eae;
  eae.task = Task::kEae;
  eae.secondary = Span{0, 47, 54, "Florida"};
  EXPECT_EQ(instantiate({"t0", "Someone died in {Y}"}, eae), "Someone died in Florida");
}

TEST(InstantiateTest, VerbatimSubstitution) {
  EXPECT_EQ(instantiate({"t0", "{X} is a person"}, Ner("{Y} $1 \\n")),
            "{Y} $1 \\n is a person");
}

TEST(InstantiateTest, MissingSpanThrows) {
  Candidate ee;
  ee.task = Task::kEe;
  EXPECT_THROW(instantiate({"t0", "{X} is an attack"}, ee), VerbalizationError);
  EXPECT_THROW(instantiate({"t0", "{X} met {Y}"}, Ner("A")), VerbalizationError);
}

TEST(HypothesesTest, CartesianOverTypesAndTemplates) {
  Schema s;
  s.entity_types.push_back({"PERSON", {{"t0", "{X} is a person"}}});
  s.entity_types.push_back({"ORG", {{"t0", "{X} is an organization"}, {"t1", "{X} is a company"}}});
  auto h = hypotheses_for(Ner("John Smith"), s);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[0].label, "PERSON");
  EXPECT_EQ(h[2].text, "John Smith is a company");
  EXPECT_EQ(h[2].template_id, "t1");
}

TEST(HypothesesTest, RelationConstraint) {
  Schema s = load_schema(ReadFile(ZSIE_DATA_DIR "/sample_schema.json"));
  Candidate c;
  c.task = Task::kRe;
  c.primary = Span{0, 0, 10, "John Smith"};
  c.secondary = Span{0, 58, 64, "Sunday"};
  c.left_type = "PERSON";
  c.right_type = "DATE";
  auto h = hypotheses_for(c, s);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].label, "per:date_of_death");
  EXPECT_EQ(h[0].text, "John Smith died on Sunday");
  c.left_type = "DATE";
  c.right_type = "PERSON";
  EXPECT_TRUE(hypotheses_for(c, s).empty());
}

TEST(HypothesesTest, EventModes) {
  Schema s = load_schema(ReadFile(ZSIE_DATA_DIR "/sample_schema.json"));
  s.event_types.push_back({"Attack", {{"t0", "{X} is an attack"}}, TriggerMode::kTriggerSpan});
  Candidate sentence;
  sentence.task = Task::kEe;
  auto h = hypotheses_for(sentence, s);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[1].text, "A person died");
  Candidate trigger = sentence;
  trigger.primary = Span{0, 3, 8, "fired"};
  h = hypotheses_for(trigger, s);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].text, "fired is an attack");
}

TEST(HypothesesTest, TriggerTemplatesSkippedWithoutTrigger) {
  Schema s = load_schema(ReadFile(ZSIE_DATA_DIR "/sample_schema.json"));
  s.argument_roles[0].templates.push_back({"t1", "{Y} was killed in {X}"});
  Candidate c;
  c.task = Task::kEae;
  c.left_type = "Life.Die";
  c.right_type = "PERSON";
  c.secondary = Span{0, 0, 10, "John Smith"};
  std::vector<std::string> warnings;
  auto h = hypotheses_for(c, s, &warnings);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].text, "John Smith died");
  EXPECT_EQ(warnings.size(), 1u);
  c.primary = Span{0, 40, 44, "died"};
  h = hypotheses_for(c, s, &warnings);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[1].text, "John Smith was killed in died");
}

}  // namespace
}  // namespace zsie
