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

#ifndef ZSIE_EVAL_H_
#define ZSIE_EVAL_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "zsie/candidates.h"
#include "zsie/pipeline.h"

namespace zsie {

struct GoldRelation {
  int sentence_index = 0;
  int head_start = 0, head_end = 0;
  int tail_start = 0, tail_end = 0;
  std::string label;

  bool operator==(const GoldRelation &) const = default;
};

struct GoldEvent {
  int sentence_index = 0;
  std::string type;

  bool operator==(const GoldEvent &) const = default;
};

struct GoldArgument {
  int sentence_index = 0;
  std::string event_type;
  int start = 0, end = 0;
  std::string role;

  bool operator==(const GoldArgument &) const = default;
};

// Annotated document; offsets are relative to each sentence. Predictions
// use the same shape.
struct GoldDocument {
  std::string id;
  std::vector<std::string> sentences;
  std::vector<GoldEntity> entities;
  std::vector<GoldRelation> relations;
  std::vector<GoldEvent> events;
  std::vector<GoldArgument> arguments;

  bool operator==(const GoldDocument &) const = default;
};

struct GoldCorpus {
  std::vector<GoldDocument> documents;
  std::vector<std::string> labels;  // declared inventory; empty = any

  bool operator==(const GoldCorpus &) const = default;
};

// Decodes BIO/IOB1 tags into [begin, end, type) token spans. A span starts
// at B-X, or at I-X not preceded by a tag of type X. Tags whose type is in
// `dropped` count as O.
struct TagSpan {
  int begin = 0;
  int end = 0;
  std::string type;

  bool operator==(const TagSpan &) const = default;
};
std::vector<TagSpan> DecodeBio(const std::vector<std::string> &tags,
                               const std::vector<std::string> &dropped = {});

// Default CoNLL type names: PER, ORG, LOC -> PERSON, ORGANIZATION, LOCATION.
const std::map<std::string, std::string> &DefaultConllLabelMap();

// Reads CoNLL 2003 column files (token first, NER tag last; -DOCSTART-
// separates documents, blank lines sentences). Sentence text is the tokens
// joined by single spaces. MISC is relabeled O. Throws ParseError with the
// line number on malformed lines or tags.
GoldCorpus load_conll(std::string_view source,
                      const std::map<std::string, std::string> &label_map =
                          DefaultConllLabelMap());

// Gold-corpus JSON format; see README.
GoldCorpus load_corpus(std::string_view source);
nlohmann::json CorpusToJson(const GoldCorpus &corpus);

// Prediction document equivalent to a pipeline run over `sentences`.
GoldDocument PredictionsFromAnnotations(const DocumentAnnotations &doc,
                                        const std::string &id);

struct Counts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  double precision() const;  // 0 when nothing was predicted
  double recall() const;
  double f1() const;         // 0 when precision + recall is 0

  bool operator==(const Counts &) const = default;
};

struct ScoreReport {
  Task task = Task::kNer;
  Counts micro;
  std::map<std::string, Counts> per_type;
  std::optional<double> threshold;

  double precision() const { return micro.precision(); }
  double recall() const { return micro.recall(); }
  double f1() const { return micro.f1(); }
};

nlohmann::json ReportToJson(const ScoreReport &report);
std::string ReportToText(const ScoreReport &report);

// Micro P/R/F1 with exact matching: spans and type for NER; both spans,
// direction and label for RE; (sentence, event type) for EE; event type,
// filler span and role for EAE. Documents are matched by id; throws
// ValidationError if the two sides cover different documents.
ScoreReport score_task(const GoldCorpus &predictions, const GoldCorpus &gold,
                       Task task);

// A decision that can be re-thresholded: predicted (id, label) with the
// entailment probability behind it.
struct ScoredItem {
  std::string id;
  std::string label;
  double score = 0.0;

  bool operator==(const ScoredItem &) const = default;
};

struct GoldItem {
  std::string id;
  std::string label;

  bool operator==(const GoldItem &) const = default;
  auto operator<=>(const GoldItem &) const = default;
};

// Counts of items with score >= threshold against the gold pairs.
Counts CountsAt(const std::vector<ScoredItem> &items,
                const std::vector<GoldItem> &gold, double threshold);

struct TuneResult {
  double threshold = 0.5;
  ScoreReport report;
};

// Exhaustive grid over {0, step, 2 step, ..., 1}; returns the threshold of
// highest micro-F1, preferring the largest on ties. Throws Error on an
// empty item list or a step outside (0, 1].
TuneResult tune_threshold(const std::vector<ScoredItem> &items,
                          const std::vector<GoldItem> &gold, double step = 0.01,
                          Task task = Task::kNer);

}  // namespace zsie

#endif  // ZSIE_EVAL_H_
