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

#ifndef ZSIE_INFERENCE_H_
#define ZSIE_INFERENCE_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "zsie/candidates.h"
#include "zsie/entailment.h"
#include "zsie/verbalizer.h"

namespace zsie {

struct InferenceConfig {
  double threshold = 0.5;
  std::map<Task, double> task_thresholds;

  double ThresholdFor(Task task) const;

  // Throws ValidationError if any threshold is outside [0, 1].
  void Validate() const;

  bool operator==(const InferenceConfig &) const = default;
};

// Best entailment probability reached by one type, and the template that
// reached it first.
struct TypeScore {
  std::string label;
  double score = 0.0;
  std::string template_id;

  bool operator==(const TypeScore &) const = default;
};

// A typed decision over a candidate. Negative decisions keep the best score
// and template so the decision can be re-applied at other thresholds.
struct Extraction {
  std::string id;
  Task task = Task::kNer;
  std::string premise;
  Candidate candidate;
  std::string label;      // best_type when positive, else NEGATIVE
  std::string best_type;  // highest-scoring type, set whenever scored
  double score = 0.0;
  std::string template_id;
  std::string template_text;
  std::string hypothesis;
  std::vector<TypeScore> type_scores;  // one per scored type, schema order

  bool positive() const { return label != kNegativeLabel; }

  // Type scores by descending score (ties in schema order), at most `limit`
  // of them (0 = all).
  std::vector<TypeScore> Ranked(size_t limit = 0) const;

  bool operator==(const Extraction &) const = default;
};

// Aggregation of per-hypothesis scores, independent of any backend.
struct Decision {
  int winner = -1;  // index of the winning hypothesis, -1 when none scored
  std::vector<TypeScore> type_scores;
  std::vector<int> type_winners;  // hypothesis index per type_scores entry
};

// Per-type score is the max entailment over that type's hypotheses; types
// and templates are ranked by first appearance. `entail[i]` scores
// hypotheses[i].
Decision Aggregate(std::span<const Hypothesis> hypotheses,
                   std::span<const double> entail);

// Single-label rule: the type with the highest entailment if it reaches
// the threshold, otherwise NEGATIVE. An empty hypothesis list yields
// NEGATIVE with score 0 without calling the backend.
Extraction classify_candidate(const std::string &premise,
                              const Candidate &candidate,
                              const std::vector<Hypothesis> &hypotheses,
                              const EntailmentBackend &backend,
                              const InferenceConfig &config);

// Same rule, from precomputed entailment scores.
Extraction DecideCandidate(const std::string &premise,
                           const Candidate &candidate,
                           std::span<const Hypothesis> hypotheses,
                           std::span<const double> entail, double threshold);

// Multi-label rule for events: one positive extraction per event type whose
// best template reaches the threshold, in schema order. No NEGATIVE records.
std::vector<Extraction> classify_events(
    const std::string &premise, const Candidate &candidate,
    const std::vector<Hypothesis> &hypotheses,
    const EntailmentBackend &backend, const InferenceConfig &config);

std::vector<Extraction> DecideEvents(const std::string &premise,
                                     const Candidate &candidate,
                                     std::span<const Hypothesis> hypotheses,
                                     std::span<const double> entail,
                                     double threshold);

// Per-type (score, template) candidates for the multi-label rule, before
// thresholding; used to keep negatives around for threshold tuning.
std::vector<Extraction> ScoreEvents(const std::string &premise,
                                    const Candidate &candidate,
                                    std::span<const Hypothesis> hypotheses,
                                    std::span<const double> entail);

}  // namespace zsie

#endif  // ZSIE_INFERENCE_H_
