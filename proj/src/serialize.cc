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

#include "zsie/serialize.h"

#include "zsie/errors.h"
#include "zsie/json_util.h"

namespace zsie {

using nlohmann::json;

json SpanToJson(const Span &span) {
  return {{"sentence", span.sentence_index},
          {"start", span.start},
          {"end", span.end},
          {"text", span.text}};
}

Span SpanFromJson(const json &j, const std::string &path) {
  RequireObject(j, path);
  Span s;
  s.sentence_index = static_cast<int>(RequireInt(j, "sentence", path));
  s.start = static_cast<int>(RequireInt(j, "start", path));
  s.end = static_cast<int>(RequireInt(j, "end", path));
  s.text = RequireString(j, "text", path);
  if (s.start < 0 || s.start >= s.end ||
      static_cast<int>(s.text.size()) != s.end - s.start) {
    throw ValidationError(path + ": span offsets do not match its text");
  }
  return s;
}

json CandidateToJson(const Candidate &c) {
  json j;
  j["task"] = std::string(TaskName(c.task));
  j["sentence"] = c.sentence_index;
  j["primary"] = c.primary ? SpanToJson(*c.primary) : json();
  j["secondary"] = c.secondary ? SpanToJson(*c.secondary) : json();
  if (!c.left_type.empty()) j["left_type"] = c.left_type;
  if (!c.right_type.empty()) j["right_type"] = c.right_type;
  if (!c.eligible.empty()) j["eligible"] = c.eligible;
  return j;
}

Candidate CandidateFromJson(const json &j, const std::string &path) {
  RequireObject(j, path);
  Candidate c;
  auto task = ParseTask(RequireString(j, "task", path));
  if (!task) throw ParseError(path + ".task: unknown task");
  c.task = *task;
  c.sentence_index = static_cast<int>(RequireInt(j, "sentence", path));
  if (j.contains("primary") && !j["primary"].is_null()) {
    c.primary = SpanFromJson(j["primary"], path + ".primary");
  }
  if (j.contains("secondary") && !j["secondary"].is_null()) {
    c.secondary = SpanFromJson(j["secondary"], path + ".secondary");
  }
  c.left_type = OptionalString(j, "left_type", path).value_or("");
  c.right_type = OptionalString(j, "right_type", path).value_or("");
  if (j.contains("eligible")) {
    for (const json &e : RequireArray(j, "eligible", path)) {
      if (!e.is_string()) throw ParseError(path + ".eligible: expected strings");
      c.eligible.push_back(e.get<std::string>());
    }
  }
  return c;
}

namespace {

json TypeScoresToJson(const std::vector<TypeScore> &scores) {
  json list = json::array();
  for (const TypeScore &t : scores) {
    list.push_back(
        {{"type", t.label}, {"score", t.score}, {"template", t.template_id}});
  }
  return list;
}

}  // namespace

json ExtractionToJson(const Extraction &e, size_t rank_limit) {
  json j;
  j["id"] = e.id;
  j["task"] = std::string(TaskName(e.task));
  j["premise"] = e.premise;
  j["candidate"] = CandidateToJson(e.candidate);
  j["label"] = e.label;
  j["best_type"] = e.best_type;
  j["score"] = e.score;
  j["template"] = e.template_id;
  j["template_text"] = e.template_text;
  j["hypothesis"] = e.hypothesis;
  j["type_scores"] = TypeScoresToJson(e.type_scores);
  j["ranked"] = TypeScoresToJson(e.Ranked(rank_limit));
  return j;
}

Extraction ExtractionFromJson(const json &j, const std::string &path) {
  RequireObject(j, path);
  Extraction e;
  e.id = RequireString(j, "id", path);
  auto task = ParseTask(RequireString(j, "task", path));
  if (!task) throw ParseError(path + ".task: unknown task");
  e.task = *task;
  e.premise = OptionalString(j, "premise", path).value_or("");
  if (j.contains("candidate")) {
    e.candidate = CandidateFromJson(j["candidate"], path + ".candidate");
  } else {
    e.candidate.task = e.task;
  }
  e.label = RequireString(j, "label", path);
  e.best_type = OptionalString(j, "best_type", path).value_or(e.label);
  e.score = RequireNumber(j, "score", path);
  e.template_id = OptionalString(j, "template", path).value_or("");
  e.template_text = OptionalString(j, "template_text", path).value_or("");
  e.hypothesis = OptionalString(j, "hypothesis", path).value_or("");
  if (j.contains("type_scores")) {
    const json &list = RequireArray(j, "type_scores", path);
    for (size_t i = 0; i < list.size(); ++i) {
      std::string p = path + ".type_scores[" + std::to_string(i) + "]";
      RequireObject(list[i], p);
      e.type_scores.push_back({RequireString(list[i], "type", p),
                               RequireNumber(list[i], "score", p),
                               OptionalString(list[i], "template", p).value_or("")});
    }
  }
  if (!(e.score >= 0.0 && e.score <= 1.0)) {
    throw ValidationError(path + ".score: outside [0, 1]");
  }
  return e;
}

json SentenceToJson(const Sentence &s) {
  json tokens = json::array();
  for (const Token &t : s.tokens) {
    tokens.push_back({{"text", t.text},
                      {"start", t.start},
                      {"end", t.end},
                      {"pos", std::string(PosName(t.pos))}});
  }
  return {{"index", s.index},
          {"text", s.text},
          {"offset", s.text_offset},
          {"tokens", std::move(tokens)}};
}

json AnnotationsToJson(const DocumentAnnotations &doc, size_t rank_limit) {
  json j;
  j["doc_id"] = doc.doc_id;
  j["text"] = doc.text;
  j["complete"] = doc.complete;
  if (!doc.error.empty()) j["error"] = doc.error;
  j["sentences"] = json::array();
  for (const Sentence &s : doc.sentences) {
    j["sentences"].push_back(SentenceToJson(s));
  }
  auto list = [&](const std::vector<Extraction> &xs) {
    json out = json::array();
    for (const Extraction &e : xs) out.push_back(ExtractionToJson(e, rank_limit));
    return out;
  };
  j["entities"] = list(doc.entities);
  j["events"] = list(doc.events);
  j["relations"] = list(doc.relations);
  j["arguments"] = list(doc.arguments);
  if (!doc.negatives.empty()) j["negatives"] = list(doc.negatives);
  if (!doc.gold_entities.empty() || !doc.gold_events.empty()) {
    json gold;
    gold["entities"] = json::array();
    for (const TypedSpan &t : doc.gold_entities) {
      json s = SpanToJson(t.span);
      s["type"] = t.type;
      gold["entities"].push_back(std::move(s));
    }
    gold["events"] = json::array();
    for (const EventMention &ev : doc.gold_events) {
      gold["events"].push_back(
          {{"sentence", ev.sentence_index},
           {"type", ev.type},
           {"trigger", ev.trigger ? SpanToJson(*ev.trigger) : json()}});
    }
    j["gold"] = std::move(gold);
  }
  j["warnings"] = doc.warnings;
  json prov;
  prov["mode"] = doc.provenance.mode;
  if (doc.provenance.task) {
    prov["task"] = std::string(TaskName(*doc.provenance.task));
  }
  prov["schema_version"] = doc.provenance.schema_version;
  prov["config"] = doc.provenance.config;
  j["provenance"] = std::move(prov);
  return j;
}

}  // namespace zsie
