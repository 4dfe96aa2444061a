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

#ifndef ZSIE_PIPELINE_H_
#define ZSIE_PIPELINE_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "zsie/candidates.h"
#include "zsie/config.h"
#include "zsie/entailment.h"
#include "zsie/inference.h"
#include "zsie/schema.h"
#include "zsie/text.h"

namespace zsie {

// External entity recognizer, the alternative to entailment-based NER for
// feeding RE and EAE. Must be safe for concurrent calls.
class EntitySource {
 public:
  virtual ~EntitySource() = default;

  // Mentions per sentence, parallel to `sentences`.
  virtual std::vector<std::vector<TypedSpan>> Recognize(
      const std::vector<Sentence> &sentences) const = 0;
};

// Client for POST /entities: request {"sentences": [string, ...]}, response
// {"sentences": [{"entities": [{"start", "end", "type"}, ...]}, ...]}, with
// offsets into each sentence.
class HttpEntitySource : public EntitySource {
 public:
  explicit HttpEntitySource(std::string base_url);

  std::vector<std::vector<TypedSpan>> Recognize(
      const std::vector<Sentence> &sentences) const override;

 private:
  std::string base_url_;
};

// User-labelled spans for task mode. Offsets are relative to the sentence.
struct GoldEntity {
  int sentence_index = 0;
  int start = 0;
  int end = 0;
  std::string type;

  bool operator==(const GoldEntity &) const = default;
};

struct GoldTrigger {
  int sentence_index = 0;
  std::string type;
  std::optional<std::pair<int, int>> span;  // absent for sentence-level events

  bool operator==(const GoldTrigger &) const = default;
};

struct GoldSpans {
  std::vector<GoldEntity> entities;
  std::vector<GoldTrigger> triggers;

  bool operator==(const GoldSpans &) const = default;
};

GoldSpans GoldSpansFromJson(const nlohmann::json &doc);
nlohmann::json GoldSpansToJson(const GoldSpans &gold);

// Gold spans equivalent to the entity and event extractions of `doc`.
struct DocumentAnnotations;
GoldSpans GoldFromAnnotations(const DocumentAnnotations &doc);

struct Provenance {
  std::string mode;  // "e2e" or "task"
  std::optional<Task> task;
  nlohmann::json config;
  long schema_version = 0;

  bool operator==(const Provenance &) const = default;
};

struct DocumentAnnotations {
  std::string doc_id;
  std::string text;
  std::vector<Sentence> sentences;
  std::vector<Extraction> entities;
  std::vector<Extraction> events;
  std::vector<Extraction> relations;
  std::vector<Extraction> arguments;
  // Below-threshold decisions, only with RunConfig::keep_negatives.
  std::vector<Extraction> negatives;
  // Upstream spans supplied as gold (task mode) and used by this run.
  std::vector<TypedSpan> gold_entities;
  std::vector<EventMention> gold_events;
  std::vector<std::string> warnings;
  bool complete = true;
  std::string error;
  Provenance provenance;

  // Every extraction, in entity/event/relation/argument order.
  std::vector<const Extraction *> AllExtractions() const;

  bool operator==(const DocumentAnnotations &) const = default;
};

// Services used by a run. `tagger` and `entity_source` may be null: the
// rule tagger is used, and entity_source "service" fails with
// ConfigurationError.
struct Backends {
  const EntailmentBackend *entailment = nullptr;
  const TaggerBackend *tagger = nullptr;
  const EntitySource *entity_source = nullptr;
};

// Backends built from a RunConfig: `backend`, `tagger` and
// `entity_service` (the latter only when entity_source is "service").
struct OwnedBackends {
  std::shared_ptr<const EntailmentBackend> entailment;
  std::shared_ptr<const TaggerBackend> tagger;
  std::shared_ptr<const EntitySource> entity_source;

  Backends view() const {
    return {entailment.get(), tagger.get(), entity_source.get()};
  }
};

// Throws ConfigurationError, or the loader's error for a bad oracle file.
OwnedBackends MakeBackends(const RunConfig &config);

// Stable key of a document: 16 hex digits of the FNV-1a hash of its text.
std::string DocumentId(std::string_view text);

// Full pipeline: preprocess, NER, EE, then RE over NER output and EAE over
// EE and NER output, all against the same schema snapshot. Backend failures
// stop the run; what completed is returned with complete = false.
DocumentAnnotations run_e2e(std::string_view text, const Schema &schema,
                            const RunConfig &config, const Backends &backends);

// One task in isolation. RE and EAE take entities (and, for EAE, events)
// from `gold` when given; otherwise from the configured entity source
// (EAE then runs EE itself). Throws ConfigurationError if RE/EAE have
// neither.
DocumentAnnotations run_task(Task task, std::string_view text,
                             const std::optional<GoldSpans> &gold,
                             const Schema &schema, const RunConfig &config,
                             const Backends &backends);

// run_task over pre-segmented sentences (e.g. from a gold corpus); sentence
// i of the output is sentences[i], untrimmed.
DocumentAnnotations run_task_on_sentences(
    Task task, const std::vector<std::string> &sentences,
    const std::optional<GoldSpans> &gold, const Schema &schema,
    const RunConfig &config, const Backends &backends);

}  // namespace zsie

#endif  // ZSIE_PIPELINE_H_
