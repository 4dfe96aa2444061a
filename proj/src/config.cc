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

#include "zsie/config.h"

#include "zsie/errors.h"
#include "zsie/json_util.h"

namespace zsie {

using nlohmann::json;

std::vector<PosPattern> RunConfig::CompiledPatterns() const {
  std::vector<PosPattern> out;
  for (const std::string &p : ner_patterns) out.push_back(PosPattern::Parse(p));
  return out;
}

RunConfig RunConfigFromJson(const json &doc) {
  const std::string path = "config";
  RequireObject(doc, path);
  RejectUnknownKeys(doc,
                    {"threshold", "task_thresholds", "ner_patterns",
                     "trigger_tags", "entity_source", "entity_service",
                     "backend", "tagger", "max_batch", "max_in_flight", "jobs",
                     "keep_negatives"},
                    path);
  RunConfig c;
  if (doc.contains("threshold")) {
    c.inference.threshold = RequireNumber(doc, "threshold", path);
  }
  if (doc.contains("task_thresholds")) {
    const json &t = RequireObject(doc["task_thresholds"],
                                  path + ".task_thresholds");
    for (auto it = t.begin(); it != t.end(); ++it) {
      auto task = ParseTask(it.key());
      if (!task) throw ParseError(path + ".task_thresholds: unknown task " + it.key());
      if (!it->is_number()) {
        throw ParseError(path + ".task_thresholds." + it.key() +
                         ": expected number");
      }
      c.inference.task_thresholds[*task] = it->get<double>();
    }
  }
  if (doc.contains("ner_patterns")) {
    c.ner_patterns.clear();
    for (const json &p : RequireArray(doc, "ner_patterns", path)) {
      if (!p.is_string()) throw ParseError(path + ".ner_patterns: expected strings");
      c.ner_patterns.push_back(p.get<std::string>());
    }
  }
  if (doc.contains("trigger_tags")) {
    c.trigger_tags.clear();
    for (const json &p : RequireArray(doc, "trigger_tags", path)) {
      auto pos = p.is_string() ? ParsePos(p.get<std::string>()) : std::nullopt;
      if (!pos) throw ParseError(path + ".trigger_tags: unknown tag " + p.dump());
      c.trigger_tags.push_back(*pos);
    }
  }
  if (auto source = OptionalString(doc, "entity_source", path)) {
    if (*source == "te") {
      c.entity_source = EntitySourceKind::kEntailment;
    } else if (*source == "service") {
      c.entity_source = EntitySourceKind::kService;
    } else {
      throw ParseError(path + ".entity_source: expected \"te\" or \"service\"");
    }
  }
  c.entity_service = OptionalString(doc, "entity_service", path).value_or("");
  c.backend = OptionalString(doc, "backend", path).value_or(c.backend);
  c.tagger = OptionalString(doc, "tagger", path).value_or("");
  if (doc.contains("max_batch")) c.max_batch = RequireInt(doc, "max_batch", path);
  if (doc.contains("max_in_flight")) {
    c.max_in_flight = RequireInt(doc, "max_in_flight", path);
  }
  if (doc.contains("jobs")) c.jobs = RequireInt(doc, "jobs", path);
  if (doc.contains("keep_negatives")) {
    if (!doc["keep_negatives"].is_boolean()) {
      throw ParseError(path + ".keep_negatives: expected boolean");
    }
    c.keep_negatives = doc["keep_negatives"].get<bool>();
  }

  c.inference.Validate();
  c.CompiledPatterns();  // throws on bad patterns
  if (c.max_batch < 1) throw ValidationError("max_batch must be positive");
  if (c.max_in_flight < 1) throw ValidationError("max_in_flight must be positive");
  if (c.jobs < 0) throw ValidationError("jobs must be non-negative");
  if (c.entity_source == EntitySourceKind::kService && c.entity_service.empty()) {
    throw ValidationError("entity_source \"service\" needs entity_service");
  }
  return c;
}

RunConfig load_run_config(std::string_view source) {
  return RunConfigFromJson(ParseJson(source));
}

json RunConfigToJson(const RunConfig &c) {
  json doc;
  doc["threshold"] = c.inference.threshold;
  json tasks = json::object();
  for (const auto &[task, t] : c.inference.task_thresholds) {
    tasks[std::string(TaskName(task))] = t;
  }
  doc["task_thresholds"] = tasks;
  doc["ner_patterns"] = c.ner_patterns;
  json tags = json::array();
  for (Pos p : c.trigger_tags) tags.push_back(std::string(PosName(p)));
  doc["trigger_tags"] = tags;
  if (c.entity_source) {
    doc["entity_source"] =
        *c.entity_source == EntitySourceKind::kService ? "service" : "te";
  }
  if (!c.entity_service.empty()) doc["entity_service"] = c.entity_service;
  doc["backend"] = c.backend;
  if (!c.tagger.empty()) doc["tagger"] = c.tagger;
  doc["max_batch"] = c.max_batch;
  doc["max_in_flight"] = c.max_in_flight;
  doc["jobs"] = c.jobs;
  doc["keep_negatives"] = c.keep_negatives;
  return doc;
}

}  // namespace zsie
