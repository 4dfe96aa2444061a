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

#include "zsie/errors.h"

namespace zsie {

namespace {

void Substitute(std::string *text, std::string_view slot,
                const std::string &value) {
  size_t pos = text->find(slot);
  if (pos != std::string::npos) text->replace(pos, slot.size(), value);
}

std::string Describe(const Candidate &c) {
  std::string s = std::string(TaskName(c.task)) + " candidate in sentence " +
                  std::to_string(c.sentence_index);
  if (c.primary) s += " [" + c.primary->text + "]";
  if (c.secondary) s += " [" + c.secondary->text + "]";
  return s;
}

void Emit(const std::string &label, const std::vector<Template> &templates,
          const Candidate &candidate, std::vector<Hypothesis> *out) {
  for (const Template &t : templates) {
    out->push_back({instantiate(t, candidate), label, t.id, t.text});
  }
}

}  // namespace

std::string instantiate(const Template &tmpl, const Candidate &candidate) {
  if (tmpl.has_x() && !candidate.primary) {
    throw VerbalizationError("template " + tmpl.id + " \"" + tmpl.text +
                             "\" needs {X} but " + Describe(candidate) +
                             " has no primary span");
  }
  if (tmpl.has_y() && !candidate.secondary) {
    throw VerbalizationError("template " + tmpl.id + " \"" + tmpl.text +
                             "\" needs {Y} but " + Describe(candidate) +
                             " has no secondary span");
  }
  std::string text = tmpl.text;
  if (candidate.primary) Substitute(&text, "{X}", candidate.primary->text);
  if (candidate.secondary) Substitute(&text, "{Y}", candidate.secondary->text);
  return text;
}

std::vector<Hypothesis> hypotheses_for(const Candidate &candidate,
                                       const Schema &schema,
                                       std::vector<std::string> *warnings) {
  std::vector<Hypothesis> out;
  switch (candidate.task) {
    case Task::kNer:
      for (const EntityTypeDef &e : schema.entity_types) {
        Emit(e.name, e.templates, candidate, &out);
      }
      break;
    case Task::kEe: {
      TriggerMode mode = candidate.primary ? TriggerMode::kTriggerSpan
                                           : TriggerMode::kSentenceLevel;
      for (const EventTypeDef &e : schema.event_types) {
        if (e.trigger_mode == mode) Emit(e.name, e.templates, candidate, &out);
      }
      break;
    }
    case Task::kRe:
      for (const RelationTypeDef &r : schema.relation_types) {
        if (r.Allows(candidate.left_type, candidate.right_type)) {
          Emit(r.name, r.templates, candidate, &out);
        }
      }
      break;
    case Task::kEae:
      for (const ArgumentRoleDef *role : schema.RolesOf(candidate.left_type)) {
        if (!role->AcceptsFiller(candidate.right_type)) continue;
        for (const Template &t : role->templates) {
          if (t.has_x() && !candidate.primary) {
            if (warnings != nullptr) {
              warnings->push_back("skipped template " + role->name + "/" +
                                  t.id + " \"" + t.text +
                                  "\": event has no trigger span");
            }
            continue;
          }
          out.push_back({instantiate(t, candidate), role->name, t.id, t.text});
        }
      }
      break;
  }
  return out;
}

}  // namespace zsie
