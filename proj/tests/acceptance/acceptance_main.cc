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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Runs with the in-process mock backend only.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "oracles.h"
#include "zsie/candidates.h"
#include "zsie/entailment.h"
#include "zsie/eval.h"
#include "zsie/inference.h"
#include "zsie/metrics.h"
#include "zsie/pipeline.h"
#include "zsie/serialize.h"

namespace {

using namespace zsie;

// Collects the first few mismatches of one criterion.
class Check {
 public:
  void Fail(const std::string &why) {
    if (failures_++ < 5) std::fprintf(stderr, "    %s\n", why.c_str());
  }
  void Expect(bool ok, const std::string &why) {
    if (!ok) Fail(why);
  }
  bool ok() const { return failures_ == 0; }

 private:
  int failures_ = 0;
};

std::string Str(double d) {
  std::ostringstream s;
  s.precision(17);
  s << d;
  return s.str();
}

struct Instance {
  std::vector<Hypothesis> hyps;
  std::vector<oracle::Scored> scored;
  OracleTable table;
};

Instance RandomInstance(std::mt19937 &rng) {
  Instance in;
  int types = 1 + rng() % 6;
  for (int t = 0; t < types; ++t) {
    int templates = 1 + rng() % 3;
    for (int k = 0; k < templates; ++k) {
      Hypothesis h;
      h.label = "T" + std::to_string(t);
      h.template_id = "t" + std::to_string(k);
      h.text = "x is " + h.label + " via " + h.template_id;
      // A coarse grid makes ties frequent.
      double e = (rng() % 21) / 20.0;
      in.table.Set("p", h.text, {e, 1.0 - e, 0.0});
      in.scored.push_back({h.label, h.template_id, e});
      in.hyps.push_back(h);
    }
  }
  return in;
}

void DecisionRule(Check &c) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(1001);
  Candidate cand;
  cand.primary = Span{0, 0, 1, "x"};
  for (int round = 0; round < 1000; ++round) {
    Instance in = RandomInstance(rng);
    MockBackend backend(in.table);
    InferenceConfig config;
    config.threshold = (rng() % 101) / 100.0;
    Extraction e = classify_candidate("p", cand, in.hyps, backend, config);
    oracle::Outcome want = oracle::Decide(in.scored, config.threshold);
    c.Expect(e.label == want.label && e.best_type == want.best_type &&
                 e.score == want.score && e.template_id == want.template_id,
             "single-label mismatch in instance " + std::to_string(round));
    auto got = classify_events("p", cand, in.hyps, backend, config);
    auto multi = oracle::DecideMulti(in.scored, config.threshold);
    bool same = got.size() == multi.size();
    for (size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].label == multi[i].label && got[i].score == multi[i].score &&
             got[i].template_id == multi[i].template_id;
    }
    c.Expect(same, "multi-label mismatch in instance " + std::to_string(round));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.Expect(secs < 5.0, "took " + Str(secs) + " s");
}

void ThresholdMonotonicity(Check &c) {
  std::mt19937 rng(1002);
  for (int round = 0; round < 200; ++round) {
    std::vector<Instance> set;
    for (int i = 0; i < 10; ++i) set.push_back(RandomInstance(rng));
    // Continuous scores as well as grid ones.
    Instance cont;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 4; ++t) {
      double e = u(rng);
      cont.hyps.push_back({"h" + std::to_string(t), "C" + std::to_string(t), "t0", ""});
      cont.scored.push_back({"C" + std::to_string(t), "t0", e});
    }
    set.push_back(cont);
    int prev = 1 << 30;
    for (int k = 0; k <= 100; ++k) {
      int positives = 0;
      for (const Instance &in : set) {
        std::vector<double> entail;
        for (const auto &s : in.scored) entail.push_back(s.entail);
        positives += DecideCandidate("p", {}, in.hyps, entail, k / 100.0).positive();
        for (const Extraction &e : DecideEvents("p", {}, in.hyps, entail, k / 100.0)) {
          positives += e.positive();
        }
      }
      c.Expect(positives <= prev, "count rose at threshold " + Str(k / 100.0) + " in set " +
                                      std::to_string(round));
      prev = positives;
    }
  }
}

bool SameCandidates(const std::vector<Candidate> &got, const std::vector<oracle::PairKey> &want,
                    const std::vector<TypedSpan> &ents) {
  if (got.size() != want.size()) return false;
  for (size_t k = 0; k < got.size(); ++k) {
    if (want[k].head >= 0) {
      if (!got[k].primary || !(*got[k].primary == ents[want[k].head].span)) return false;
      if (got[k].left_type != ents[want[k].head].type) return false;
    }
    if (!got[k].secondary || !(*got[k].secondary == ents[want[k].tail].span)) return false;
    if (got[k].right_type != ents[want[k].tail].type) return false;
    if (got[k].eligible != want[k].eligible) return false;
  }
  return true;
}

void Constraints(Check &c) {
  std::mt19937 rng(1003);
  for (int round = 0; round < 200; ++round) {
    Schema schema = oracle::RandomSchema(rng);
    auto ents = oracle::RandomEntities(rng, schema, 3, 8);
    c.Expect(SameCandidates(relation_pair_candidates(ents, schema),
                            oracle::BruteForcePairs(ents, schema), ents),
             "relation candidates differ for schema " + std::to_string(round));
    for (const auto &ev : schema.event_types) {
      EventMention m{static_cast<int>(rng() % 3), ev.name, std::nullopt};
      c.Expect(SameCandidates(argument_candidates(m, ents, schema),
                              oracle::BruteForceArguments(m, ents, schema), ents),
               "argument candidates differ for schema " + std::to_string(round) + " event " +
                   ev.name);
    }
  }
}

std::vector<std::pair<std::string, std::string>> Labeled(const std::vector<Extraction> &list,
                                                         bool secondary) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Extraction &e : list) {
    const auto &span = secondary ? e.candidate.secondary : e.candidate.primary;
    out.emplace_back(span ? span->text : "", e.label);
  }
  return out;
}

void EndToEnd(Check &c) {
  Schema schema = fixtures::SampleSchema();
  MockBackend backend = fixtures::ObituaryBackend();
  DocumentAnnotations doc = run_e2e(fixtures::kObituary, schema, {}, {&backend});
  c.Expect(doc.complete, "run incomplete: " + doc.error);
  using Pairs = std::vector<std::pair<std::string, std::string>>;
  c.Expect(Labeled(doc.entities, false) == Pairs{{"John Smith", "PERSON"},
                                                 {"XYZ Corp.", "ORG"},
                                                 {"Florida", "GPE"},
                                                 {"Sunday", "DATE"}},
           "entities differ");
  c.Expect(Labeled(doc.events, false) == Pairs{{"", "Life.Die"}}, "events differ");
  c.Expect(Labeled(doc.arguments, true) == Pairs{{"John Smith", "Victim"},
                                                 {"Florida", "Place"},
                                                 {"Sunday", "Time"}},
           "arguments differ");
  std::string first = AnnotationsToJson(doc).dump(2);
  for (int i = 0; i < 5; ++i) {
    std::string again =
        AnnotationsToJson(run_e2e(fixtures::kObituary, schema, {}, {&backend})).dump(2);
    c.Expect(again == first, "output changed between runs");
  }
}

void DefaultThreshold(Check &c) {
  c.Expect(InferenceConfig{}.threshold == 0.5, "default threshold is not 0.5");
  c.Expect(RunConfig{}.inference.ThresholdFor(Task::kNer) == 0.5, "run config default differs");
  Schema schema = fixtures::SampleSchema();
  MockBackend obituary = fixtures::ObituaryBackend();
  const OracleTable &base = obituary.table();
  std::string person = "John Smith is a person";
  for (double s : {0.49, 0.4999999, 0.5, 0.5000001, 0.51}) {
    OracleTable t;
    for (const auto &e : base.entries()) {
      if (e.hypothesis == person) {
        t.Set(e.premise, e.hypothesis, {s, 1.0 - s, 0.0});
      } else {
        t.Set(e.premise, e.hypothesis, e.score);
      }
    }
    MockBackend backend(t);
    DocumentAnnotations doc = run_e2e(fixtures::kObituary, schema, {}, {&backend});
    bool kept = !doc.entities.empty() && doc.entities[0].label == "PERSON";
    c.Expect(kept == (s >= 0.5), "PERSON at score " + Str(s) + (kept ? " kept" : " dropped"));
    bool victim = false;
    for (const Extraction &a : doc.arguments) victim |= a.label == "Victim";
    c.Expect(victim == (s >= 0.5), "Victim at score " + Str(s));
  }
}

GoldCorpus RandomPredictions(std::mt19937 &rng, const GoldCorpus &gold) {
  static const char *kTypes[] = {"PERSON", "LOCATION", "ORGANIZATION"};
  GoldCorpus pred;
  for (const GoldDocument &d : gold.documents) {
    GoldDocument p;
    p.id = d.id;
    p.sentences = d.sentences;
    for (int s = 0; s < static_cast<int>(d.sentences.size()); ++s) {
      std::vector<std::pair<int, int>> words;
      const std::string &text = d.sentences[s];
      size_t i = 0;
      while (i < text.size()) {
        size_t j = text.find(' ', i);
        if (j == std::string::npos) j = text.size();
        words.emplace_back(static_cast<int>(i), static_cast<int>(j));
        i = j + 1;
      }
      for (const GoldEntity &g : d.entities) {
        if (g.sentence_index == s && rng() % 2) p.entities.push_back(g);
      }
      int extra = rng() % 4;
      for (int k = 0; k < extra; ++k) {
        size_t a = rng() % words.size();
        size_t b = std::min(words.size() - 1, a + rng() % 3);
        p.entities.push_back({s, words[a].first, words[b].second, kTypes[rng() % 3]});
      }
    }
    pred.documents.push_back(p);
  }
  return pred;
}

void ConllAdaptation(Check &c) {
  GoldCorpus misc = load_conll(ReadFile(ZSIE_DATA_DIR "/conll_misc.txt"));
  GoldCorpus plain = load_conll(ReadFile(ZSIE_DATA_DIR "/conll_misc_as_o.txt"));
  c.Expect(misc == plain, "loaded corpora differ");
  std::mt19937 rng(1006);
  for (int round = 0; round < 100; ++round) {
    GoldCorpus pred = RandomPredictions(rng, misc);
    c.Expect(ReportToJson(score_task(pred, misc, Task::kNer)) ==
                 ReportToJson(score_task(pred, plain, Task::kNer)),
             "scores differ for prediction set " + std::to_string(round));
  }
  for (int round = 0; round < 500; ++round) {
    auto tags = oracle::RandomTags(rng, rng() % 16);
    for (const auto &dropped : {std::vector<std::string>{}, std::vector<std::string>{"MISC"}}) {
      c.Expect(DecodeBio(tags, dropped) == oracle::BruteForceBio(tags, dropped),
               "BIO decoding differs for sequence " + std::to_string(round));
    }
  }
}

void Tuner(Check &c) {
  std::mt19937 rng(1007);
  int improved = 0;
  for (int round = 0; round < 100; ++round) {
    oracle::DevSet d = oracle::RandomDevSet(rng, 5 + rng() % 40);
    TuneResult r = tune_threshold(d.items, d.gold, 0.01);
    double f1 = r.report.f1();
    c.Expect(std::abs(f1 - oracle::F1At(d.items, d.gold, r.threshold)) < 1e-12,
             "reported F1 disagrees with oracle in set " + std::to_string(round));
    for (int k = 0; k <= 100; ++k) {
      c.Expect(f1 + 1e-12 >= oracle::F1At(d.items, d.gold, k / 100.0),
               "grid point " + Str(k / 100.0) + " beats tuned threshold in set " +
                   std::to_string(round));
    }
    double at_default = oracle::F1At(d.items, d.gold, 0.5);
    c.Expect(f1 + 1e-12 >= at_default, "default beats tuned in set " + std::to_string(round));
    improved += f1 > at_default + 1e-12;
  }
  std::fprintf(stderr, "    tuned threshold improved F1 over 0.5 on %d of 100 sets\n", improved);
}

Extraction RandomExtraction(std::mt19937 &rng, int i) {
  static const Task kTasks[] = {Task::kNer, Task::kRe, Task::kEe, Task::kEae};
  Extraction e;
  e.id = "id" + std::to_string(i);
  e.task = kTasks[rng() % 4];
  e.premise = "p";
  e.candidate.task = e.task;
  e.candidate.primary = Span{0, 0, 1, "x"};
  if (e.task == Task::kEae) {
    e.candidate.left_type = "Life.Die";
    e.candidate.secondary = Span{0, 2, 3, "y"};
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  e.label = "T" + std::to_string(rng() % 3);
  e.best_type = e.label;
  e.score = u(rng);
  e.template_id = "t" + std::to_string(rng() % 2);
  e.template_text = "{X} is " + e.label;
  e.type_scores = {{e.label, e.score, e.template_id}};
  return e;
}

void Metrics(Check &c) {
  std::mt19937 rng(1008);
  for (int round = 0; round < 1000; ++round) {
    LabelStore store;
    // Key prefixes: task, task/type, task/type/template.
    std::map<std::string, std::pair<std::string, std::optional<Verdict>>> truth;
    int n = 1 + rng() % 25;
    for (int i = 0; i < n; ++i) {
      Extraction e = RandomExtraction(rng, i);
      store.Register(e);
      std::string type = e.task == Task::kEae ? "Life.Die:" + e.label : e.label;
      truth[e.id] = {std::string(TaskName(e.task)) + "/" + type + "/" + e.template_id,
                     std::nullopt};
    }
    int labels = rng() % 40;
    for (int k = 0; k < labels; ++k) {
      std::string id = "id" + std::to_string(rng() % n);
      Verdict v = rng() % 2 ? Verdict::kCorrect : Verdict::kIncorrect;
      store.record_label(id, v, k);
      truth[id].second = v;
    }
    for (MetricsScope scope : {MetricsScope::kTask, MetricsScope::kType, MetricsScope::kTemplate}) {
      MetricsQuery q;
      q.scope = scope;
      auto rows = store.metrics(q);
      long sum_total = 0, sum_labeled = 0;
      for (const MetricsRow &r : rows) {
        long total = 0, correct = 0, incorrect = 0;
        for (const auto &[id, t] : truth) {
          if (t.first.rfind(r.name, 0) != 0) continue;
          if (t.first.size() != r.name.size() && t.first[r.name.size()] != '/') continue;
          ++total;
          if (t.second) (*t.second == Verdict::kCorrect ? correct : incorrect)++;
        }
        c.Expect(r.total == total && r.correct == correct && r.incorrect == incorrect,
                 "counts differ for " + r.name + " in stream " + std::to_string(round));
        if (correct + incorrect) {
          c.Expect(r.accuracy && *r.accuracy == static_cast<double>(correct) / (correct + incorrect),
                   "accuracy differs for " + r.name);
        } else {
          c.Expect(!r.accuracy, "accuracy defined without labels for " + r.name);
        }
        sum_total += r.total;
        sum_labeled += r.correct + r.incorrect;
      }
      long labeled = 0;
      for (const auto &[id, t] : truth) labeled += t.second.has_value();
      c.Expect(sum_total == n && sum_labeled == labeled,
               "rows do not add up in stream " + std::to_string(round));
    }
    std::string exported = store.export_devset();
    LabelStore copy;
    auto warnings = copy.import_devset(exported);
    c.Expect(warnings.empty() && copy.export_devset() == exported &&
                 copy.metrics() == store.metrics(),
             "dev-set round trip lost data in stream " + std::to_string(round));
  }
}

void ModeEquivalence(Check &c) {
  std::mt19937 rng(1009);
  size_t downstream = 0;
  for (int round = 0; round < 50; ++round) {
    Schema schema = fixtures::RandomPipelineSchema(rng);
    fixtures::HashBackend backend(rng());
    RunConfig config;
    config.inference.threshold = 0.3 + (rng() % 5) / 10.0;
    std::string text = fixtures::RandomText(rng);
    auto e2e = run_e2e(text, schema, config, {&backend});
    auto chained = fixtures::ChainTasks(text, schema, config, {&backend});
    c.Expect(e2e.entities == chained.entities && e2e.events == chained.events &&
                 e2e.relations == chained.relations && e2e.arguments == chained.arguments,
             "stages differ on fixture " + std::to_string(round));
    downstream += e2e.relations.size() + e2e.arguments.size();
  }
  c.Expect(downstream > 0, "fixtures never exercised relations or arguments");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<void(Check &)>>> criteria = {
      {"decision_rule_oracle", DecisionRule},
      {"threshold_monotonicity", ThresholdMonotonicity},
      {"constraint_soundness_completeness", Constraints},
      {"end_to_end_fixture", EndToEnd},
      {"default_threshold", DefaultThreshold},
      {"conll_adaptation", ConllAdaptation},
      {"threshold_tuner", Tuner},
      {"metrics_additivity_and_devset_roundtrip", Metrics},
      {"pipeline_mode_equivalence", ModeEquivalence},
  };
  int failed = 0;
  for (const auto &[name, run] : criteria) {
    Check check;
    try {
      run(check);
    } catch (const std::exception &e) {
      check.Fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %s\n", check.ok() ? "PASS" : "FAIL", name);
    std::fflush(stdout);
    failed += !check.ok();
  }
  return failed == 0 ? 0 : 1;
}
