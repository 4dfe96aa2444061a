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

#ifndef ZSIE_CONFIG_H_
#define ZSIE_CONFIG_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "zsie/inference.h"
#include "zsie/patterns.h"
#include "zsie/text.h"

namespace zsie {

// Where RE and EAE get their entity mentions when no gold is supplied.
enum class EntitySourceKind {
  kEntailment,  // the entailment-based NER stage ("te")
  kService,     // an external entity recognizer ("service")
};

// Run configuration file. Keys:
//
//   threshold        default decision threshold (0.5)
//   task_thresholds  {"NER": 0.6, ...} per-task overrides
//   ner_patterns     POS patterns for NER candidates (["PROPN+"])
//   trigger_tags     tags proposing trigger candidates (["VERB"])
//   entity_source    "te" | "service"; E2E defaults to "te", task mode
//                    consults it only when set
//   entity_service   base URL of the entity recognizer
//   backend          "mock:<oracle-file>" | "http:<url>"
//   tagger           base URL of an external tagger; empty = rule tagger
//   max_batch        hypotheses per NLI request (32)
//   max_in_flight    concurrent NLI requests per batch (4)
//   jobs             worker threads; 0 = one per CPU
//   keep_negatives   also report below-threshold decisions
struct RunConfig {
  InferenceConfig inference;
  std::vector<std::string> ner_patterns = {"PROPN+"};
  std::vector<Pos> trigger_tags = {Pos::kVerb};
  std::optional<EntitySourceKind> entity_source;
  std::string entity_service;
  std::string backend = "mock:";
  std::string tagger;
  int max_batch = 32;
  int max_in_flight = 4;
  int jobs = 0;
  bool keep_negatives = false;

  std::vector<PosPattern> CompiledPatterns() const;

  bool operator==(const RunConfig &) const = default;
};

// Throws ParseError or ValidationError.
RunConfig load_run_config(std::string_view source);
RunConfig RunConfigFromJson(const nlohmann::json &doc);
nlohmann::json RunConfigToJson(const RunConfig &config);

}  // namespace zsie

#endif  // ZSIE_CONFIG_H_
