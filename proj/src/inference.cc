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

#include "zsie/inference.h"

#include <algorithm>
#include <map>

#include "zsie/errors.h"

namespace zsie {

double InferenceConfig::ThresholdFor(Task task) const {
  auto it = task_thresholds.find(task);
  return it == task_thresholds.end() ? threshold : it->second;
}

void InferenceConfig::Validate() const {
  auto check = [](double t, const std::string &what) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw ValidationError(what + " threshold " + std::to_string(t) +
                            " outside [0, 1]");
    }
  };
  check(threshold, "default");
  for (const auto &[task, t] : task_thresholds) {
    check(t, std::string(TaskName(task)));
  }
}

std::vector<TypeScore> Extraction::Ranked(size_t limit) const {
  std::vector<TypeScore> ranked = type_scores;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const TypeScore &a, const TypeScore &b) {
                     return a.score > b.score;
                   });
  if (limit > 0 && ranked.size() > limit) ranked.resize(limit);
  return ranked;
}

Decision Aggregate(std::span<const Hypothesis> hypotheses,
                   std::span<const double> entail) {
  Decision d;
  std::map<std::string, size_t> slot;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    const Hypothesis &h = hypotheses[i];
    auto [it, inserted] = slot.emplace(h.label, d.type_scores.size());
    if (inserted) {
      d.type_scores.push_back({h.label, entail[i], h.template_id});
      d.type_winners.push_back(static_cast<int>(i));
    } else if (entail[i] > d.type_scores[it->second].score) {
      d.type_scores[it->second].score = entail[i];
      d.type_scores[it->second].template_id = h.template_id;
      d.type_winners[it->second] = static_cast<int>(i);
    }
  }
  int best = -1;
  for (size_t t = 0; t < d.type_scores.size(); ++t) {
    if (best < 0 || d.type_scores[t].score > d.type_scores[best].score) {
      best = static_cast<int>(t);
    }
  }
  if (best >= 0) d.winner = d.type_winners[best];
  return d;
}

namespace {

Extraction Base(const std::string &premise, const Candidate &candidate) {
  Extraction e;
  e.task = candidate.task;
  e.premise = premise;
  e.candidate = candidate;
  e.label = std::string(kNegativeLabel);
  return e;
}

std::vector<double> Entailments(const std::string &premise,
                                const std::vector<Hypothesis> &hypotheses,
                                const EntailmentBackend &backend) {
  std::vector<std::string> texts;
  texts.reserve(hypotheses.size());
  for (const Hypothesis &h : hypotheses) texts.push_back(h.text);
  std::vector<EntailmentScore> scores = backend.entail_batch(premise, texts);
  if (scores.size() != hypotheses.size()) {
    throw ProtocolError("backend returned " + std::to_string(scores.size()) +
                        " scores for " + std::to_string(hypotheses.size()) +
                        " hypotheses");
  }
  std::vector<double> entail;
  entail.reserve(scores.size());
  for (const EntailmentScore &s : scores) entail.push_back(s.entail);
  return entail;
}

}  // namespace

Extraction DecideCandidate(const std::string &premise,
                           const Candidate &candidate,
                           std::span<const Hypothesis> hypotheses,
                           std::span<const double> entail, double threshold) {
  Extraction e = Base(premise, candidate);
  Decision d = Aggregate(hypotheses, entail);
  e.type_scores = std::move(d.type_scores);
  if (d.winner < 0) return e;
  const Hypothesis &h = hypotheses[d.winner];
  e.score = entail[d.winner];
  e.template_id = h.template_id;
  e.template_text = h.template_text;
  e.hypothesis = h.text;
  e.best_type = h.label;
  if (e.score >= threshold) e.label = h.label;
  return e;
}

Extraction classify_candidate(const std::string &premise,
                              const Candidate &candidate,
                              const std::vector<Hypothesis> &hypotheses,
                              const EntailmentBackend &backend,
                              const InferenceConfig &config) {
  if (hypotheses.empty()) return Base(premise, candidate);
  std::vector<double> entail = Entailments(premise, hypotheses, backend);
  return DecideCandidate(premise, candidate, hypotheses, entail,
                         config.ThresholdFor(candidate.task));
}

std::vector<Extraction> ScoreEvents(const std::string &premise,
                                    const Candidate &candidate,
                                    std::span<const Hypothesis> hypotheses,
                                    std::span<const double> entail) {
  Decision d = Aggregate(hypotheses, entail);
  std::vector<Extraction> out;
  for (size_t t = 0; t < d.type_scores.size(); ++t) {
    const Hypothesis &h = hypotheses[d.type_winners[t]];
    Extraction e = Base(premise, candidate);
    e.score = d.type_scores[t].score;
    e.template_id = h.template_id;
    e.template_text = h.template_text;
    e.hypothesis = h.text;
    e.label = h.label;
    e.best_type = h.label;
    e.type_scores = d.type_scores;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Extraction> DecideEvents(const std::string &premise,
                                     const Candidate &candidate,
                                     std::span<const Hypothesis> hypotheses,
                                     std::span<const double> entail,
                                     double threshold) {
  std::vector<Extraction> out;
  for (Extraction &e : ScoreEvents(premise, candidate, hypotheses, entail)) {
    if (e.score >= threshold) out.push_back(std::move(e));
  }
  return out;
}

std::vector<Extraction> classify_events(
    const std::string &premise, const Candidate &candidate,
    const std::vector<Hypothesis> &hypotheses,
    const EntailmentBackend &backend, const InferenceConfig &config) {
  if (hypotheses.empty()) return {};
  std::vector<double> entail = Entailments(premise, hypotheses, backend);
  return DecideEvents(premise, candidate, hypotheses, entail,
                      config.ThresholdFor(candidate.task));
}

}  // namespace zsie
