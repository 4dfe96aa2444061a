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

// Fixtures shared by the pipeline, service and acceptance tests.

#ifndef ZSIE_TESTS_FIXTURES_H_
#define ZSIE_TESTS_FIXTURES_H_

#include <cstdint>
#include <random>
#include <string>

#include "oracles.h"
#include "zsie/entailment.h"
#include "zsie/json_util.h"
#include "zsie/pipeline.h"
#include "zsie/schema.h"

namespace fixtures {

inline const char kObituary[] =
    "John Smith, an executive at XYZ Corp., died in Florida on Sunday.";

inline zsie::Schema SampleSchema() {
  return zsie::load_schema(zsie::ReadFile(ZSIE_DATA_DIR "/sample_schema.json"));
}

inline zsie::MockBackend ObituaryBackend() {
  return zsie::MockBackend(
      zsie::load_oracle(zsie::ReadFile(ZSIE_DATA_DIR "/obituary_oracle.json")));
}

// Deterministic pseudo-scores from a hash of (seed, premise, hypothesis).
class HashBackend : public zsie::EntailmentBackend {
 public:
  explicit HashBackend(uint64_t seed) : seed_(seed) {}

  std::vector<zsie::EntailmentScore> entail_batch(
      const std::string &premise,
      const std::vector<std::string> &hypotheses) const override {
    if (hypotheses.empty()) throw std::invalid_argument("empty batch");
    std::vector<zsie::EntailmentScore> out;
    for (const std::string &h : hypotheses) {
      uint64_t x = seed_ ^ 1469598103934665603ULL;
      for (unsigned char c : premise + "\x1f" + h) x = (x ^ c) * 1099511628211ULL;
      double e = static_cast<double>(x % 101) / 100.0;
      out.push_back({e, 1.0 - e, 0.0});
    }
    return out;
  }

 private:
  uint64_t seed_;
};

// Random text over a small vocabulary with proper nouns, verbs and
// function words.
inline std::string RandomText(std::mt19937 &rng) {
  static const char *kWords[] = {"Alice", "Bob", "Paris", "Acme", "Monday",
                                 "Smith", "met", "visited", "in", "the", "on",
                                 "died", "and", "works", "for", "a", "city",
                                 "Jones", "Berlin", "left"};
  std::string text;
  int sentences = 1 + rng() % 3;
  for (int s = 0; s < sentences; ++s) {
    int n = 3 + rng() % 8;
    if (s) text += ' ';
    text += (rng() % 2) ? "The" : "Yesterday";
    for (int i = 0; i < n; ++i) {
      text += ' ';
      text += kWords[rng() % 20];
    }
    text += '.';
  }
  return text;
}

// A random schema plus one trigger-span event with a trigger-aware role.
inline zsie::Schema RandomPipelineSchema(std::mt19937 &rng) {
  zsie::Schema s = oracle::RandomSchema(rng);
  s.event_types.push_back({"Move", {{"t0", "{X} is a movement"}},
                           zsie::TriggerMode::kTriggerSpan});
  s.argument_roles.push_back(
      {"Mover", "Move", {{"t0", "{Y} took part in {X}"}, {"t1", "{Y} moved"}},
       {"E0", "E1"}});
  return s;
}

// NER and EE as separate tasks, their outputs piped as gold into RE and
// EAE, assembled like an E2E result.
inline zsie::DocumentAnnotations ChainTasks(const std::string &text,
                                            const zsie::Schema &schema,
                                            const zsie::RunConfig &config,
                                            const zsie::Backends &backends) {
  using zsie::Task;
  auto ner = zsie::run_task(Task::kNer, text, std::nullopt, schema, config, backends);
  auto ee = zsie::run_task(Task::kEe, text, std::nullopt, schema, config, backends);
  zsie::DocumentAnnotations upstream;
  upstream.entities = ner.entities;
  upstream.events = ee.events;
  zsie::GoldSpans gold = zsie::GoldFromAnnotations(upstream);
  zsie::DocumentAnnotations out = ner;
  out.events = ee.events;
  if (!schema.relation_types.empty()) {
    out.relations = zsie::run_task(Task::kRe, text, gold, schema, config, backends).relations;
  }
  if (!schema.argument_roles.empty()) {
    out.arguments = zsie::run_task(Task::kEae, text, gold, schema, config, backends).arguments;
  }
  return out;
}

}  // namespace fixtures

#endif  // ZSIE_TESTS_FIXTURES_H_
