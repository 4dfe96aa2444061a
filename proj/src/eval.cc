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

#include "zsie/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "zsie/errors.h"
#include "zsie/json_util.h"

namespace zsie {

using nlohmann::json;

namespace {

bool ValidTag(const std::string &tag) {
  if (tag == "O") return true;
  return tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-';
}

std::string TagType(const std::string &tag) {
  return tag == "O" ? std::string() : tag.substr(2);
}

}  // namespace

std::vector<TagSpan> DecodeBio(const std::vector<std::string> &tags,
                               const std::vector<std::string> &dropped) {
  auto type_of = [&](size_t i) {
    std::string t = TagType(tags[i]);
    if (std::find(dropped.begin(), dropped.end(), t) != dropped.end()) return std::string();
    return t;
  };
  std::vector<TagSpan> spans;
  std::string prev;
  for (size_t i = 0; i < tags.size(); ++i) {
    std::string type = type_of(i);
    if (type.empty()) {
      prev.clear();
      continue;
    }
    bool begins = tags[i][0] == 'B' || type != prev;
    if (begins) {
      spans.push_back({static_cast<int>(i), static_cast<int>(i) + 1, type});
    } else {
      spans.back().end = static_cast<int>(i) + 1;
    }
    prev = type;
  }
  return spans;
}

const std::map<std::string, std::string> &DefaultConllLabelMap() {
  static const std::map<std::string, std::string> kMap = {
      {"PER", "PERSON"}, {"ORG", "ORGANIZATION"}, {"LOC", "LOCATION"}};
  return kMap;
}

GoldCorpus load_conll(std::string_view source,
                      const std::map<std::string, std::string> &label_map) {
  GoldCorpus corpus;
  GoldDocument doc;
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
  std::set<std::string> labels;

  auto flush_sentence = [&] {
    if (tokens.empty()) return;
    std::string text;
    std::vector<int> starts;
    for (const std::string &t : tokens) {
      if (!text.empty()) text += ' ';
      starts.push_back(static_cast<int>(text.size()));
      text += t;
    }
    int index = static_cast<int>(doc.sentences.size());
    for (const TagSpan &s : DecodeBio(tags, {"MISC"})) {
      auto mapped = label_map.find(s.type);
      std::string type = mapped == label_map.end() ? s.type : mapped->second;
      labels.insert(type);
      doc.entities.push_back({index, starts[s.begin],
                              starts[s.end - 1] +
                                  static_cast<int>(tokens[s.end - 1].size()),
                              type});
    }
    doc.sentences.push_back(std::move(text));
    tokens.clear();
    tags.clear();
  };
  auto flush_document = [&] {
    flush_sentence();
    if (doc.sentences.empty()) return;
    doc.id = "doc" + std::to_string(corpus.documents.size());
    corpus.documents.push_back(std::move(doc));
    doc = GoldDocument();
  };

  std::istringstream in{std::string(source)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string f; fields >> f;) cols.push_back(f);
    if (cols.empty()) {
      flush_sentence();
      continue;
    }
    if (cols[0] == "-DOCSTART-") {
      flush_document();
      continue;
    }
    if (cols.size() < 2) {
      throw ParseError("expected token and NER tag columns", number);
    }
    if (!ValidTag(cols.back())) {
      throw ParseError("bad NER tag \"" + cols.back() + "\"", number);
    }
    tokens.push_back(cols.front());
    tags.push_back(cols.back());
  }
  flush_document();
  corpus.labels.assign(labels.begin(), labels.end());
  return corpus;
}

namespace {

std::pair<int, int> Pair(const json &j, const std::string &path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer()) {
    throw ParseError(path + ": expected [start, end]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

void CheckSpan(const GoldDocument &doc, int sentence, int start, int end,
               const std::string &path) {
  if (sentence < 0 || sentence >= static_cast<int>(doc.sentences.size())) {
    throw ValidationError(path + ": sentence " + std::to_string(sentence) +
                          " out of range");
  }
  if (start < 0 || start >= end ||
      end > static_cast<int>(doc.sentences[sentence].size())) {
    throw ValidationError(path + ": span out of range");
  }
}

}  // namespace

GoldCorpus load_corpus(std::string_view source) {
  json root = ParseJson(source);
  RequireObject(root, "corpus");
  RejectUnknownKeys(root, {"labels", "documents"}, "corpus");
  GoldCorpus corpus;
  if (root.contains("labels")) {
    for (const json &l : RequireArray(root, "labels", "corpus")) {
      if (!l.is_string()) throw ParseError("corpus.labels: expected strings");
      corpus.labels.push_back(l.get<std::string>());
    }
  }
  auto check_label = [&](const std::string &label, const std::string &path) {
    if (!corpus.labels.empty() &&
        std::find(corpus.labels.begin(), corpus.labels.end(), label) ==
            corpus.labels.end()) {
      throw ValidationError(path + ": label " + label +
                            " not in the declared inventory");
    }
  };

  const json &docs = RequireArray(root, "documents", "corpus");
  for (size_t d = 0; d < docs.size(); ++d) {
    std::string path = "documents[" + std::to_string(d) + "]";
    const json &j = RequireObject(docs[d], path);
    RejectUnknownKeys(
        j, {"id", "sentences", "entities", "relations", "events", "arguments"},
        path);
    GoldDocument doc;
    doc.id = RequireString(j, "id", path);
    for (const json &s : RequireArray(j, "sentences", path)) {
      if (!s.is_string()) throw ParseError(path + ".sentences: expected strings");
      doc.sentences.push_back(s.get<std::string>());
    }
    auto list = [&](const char *key) {
      return j.contains(key) ? RequireArray(j, key, path) : json::array();
    };
    json entities = list("entities");
    for (size_t i = 0; i < entities.size(); ++i) {
      std::string p = path + ".entities[" + std::to_string(i) + "]";
      const json &e = RequireObject(entities[i], p);
      GoldEntity g{static_cast<int>(RequireInt(e, "sentence", p)),
                   static_cast<int>(RequireInt(e, "start", p)),
                   static_cast<int>(RequireInt(e, "end", p)),
                   RequireString(e, "type", p)};
      CheckSpan(doc, g.sentence_index, g.start, g.end, p);
      check_label(g.type, p);
      doc.entities.push_back(std::move(g));
    }
    json relations = list("relations");
    for (size_t i = 0; i < relations.size(); ++i) {
      std::string p = path + ".relations[" + std::to_string(i) + "]";
      const json &r = RequireObject(relations[i], p);
      GoldRelation g;
      g.sentence_index = static_cast<int>(RequireInt(r, "sentence", p));
      std::tie(g.head_start, g.head_end) = Pair(r.value("head", json()), p + ".head");
      std::tie(g.tail_start, g.tail_end) = Pair(r.value("tail", json()), p + ".tail");
      g.label = RequireString(r, "label", p);
      CheckSpan(doc, g.sentence_index, g.head_start, g.head_end, p + ".head");
      CheckSpan(doc, g.sentence_index, g.tail_start, g.tail_end, p + ".tail");
      check_label(g.label, p);
      doc.relations.push_back(std::move(g));
    }
    json events = list("events");
    for (size_t i = 0; i < events.size(); ++i) {
      std::string p = path + ".events[" + std::to_string(i) + "]";
      const json &e = RequireObject(events[i], p);
      GoldEvent g{static_cast<int>(RequireInt(e, "sentence", p)),
                  RequireString(e, "type", p)};
      if (g.sentence_index < 0 ||
          g.sentence_index >= static_cast<int>(doc.sentences.size())) {
        throw ValidationError(p + ": sentence out of range");
      }
      check_label(g.type, p);
      doc.events.push_back(std::move(g));
    }
    json arguments = list("arguments");
    for (size_t i = 0; i < arguments.size(); ++i) {
      std::string p = path + ".arguments[" + std::to_string(i) + "]";
      const json &a = RequireObject(arguments[i], p);
      GoldArgument g{static_cast<int>(RequireInt(a, "sentence", p)),
                     RequireString(a, "event", p),
                     static_cast<int>(RequireInt(a, "start", p)),
                     static_cast<int>(RequireInt(a, "end", p)),
                     RequireString(a, "role", p)};
      CheckSpan(doc, g.sentence_index, g.start, g.end, p);
      check_label(g.role, p);
      doc.arguments.push_back(std::move(g));
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

json CorpusToJson(const GoldCorpus &corpus) {
  json root;
  root["labels"] = corpus.labels;
  root["documents"] = json::array();
  for (const GoldDocument &doc : corpus.documents) {
    json d;
    d["id"] = doc.id;
    d["sentences"] = doc.sentences;
    d["entities"] = json::array();
    for (const GoldEntity &e : doc.entities) {
      d["entities"].push_back({{"sentence", e.sentence_index},
                               {"start", e.start},
                               {"end", e.end},
                               {"type", e.type}});
    }
    d["relations"] = json::array();
    for (const GoldRelation &r : doc.relations) {
      d["relations"].push_back({{"sentence", r.sentence_index},
                                {"head", {r.head_start, r.head_end}},
                                {"tail", {r.tail_start, r.tail_end}},
                                {"label", r.label}});
    }
    d["events"] = json::array();
    for (const GoldEvent &e : doc.events) {
      d["events"].push_back({{"sentence", e.sentence_index}, {"type", e.type}});
    }
    d["arguments"] = json::array();
    for (const GoldArgument &a : doc.arguments) {
      d["arguments"].push_back({{"sentence", a.sentence_index},
                                {"event", a.event_type},
                                {"start", a.start},
                                {"end", a.end},
                                {"role", a.role}});
    }
    root["documents"].push_back(std::move(d));
  }
  return root;
}

GoldDocument PredictionsFromAnnotations(const DocumentAnnotations &doc,
                                        const std::string &id) {
  GoldDocument out;
  out.id = id;
  for (const Sentence &s : doc.sentences) out.sentences.push_back(s.text);
  for (const Extraction &e : doc.entities) {
    const Span &s = *e.candidate.primary;
    out.entities.push_back({s.sentence_index, s.start, s.end, e.label});
  }
  for (const Extraction &e : doc.relations) {
    const Span &h = *e.candidate.primary;
    const Span &t = *e.candidate.secondary;
    out.relations.push_back(
        {h.sentence_index, h.start, h.end, t.start, t.end, e.label});
  }
  for (const Extraction &e : doc.events) {
    out.events.push_back({e.candidate.sentence_index, e.label});
  }
  for (const Extraction &e : doc.arguments) {
    const Span &f = *e.candidate.secondary;
    out.arguments.push_back({f.sentence_index, e.candidate.left_type, f.start,
                             f.end, e.label});
  }
  return out;
}

double Counts::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
}

double Counts::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
}

double Counts::f1() const {
  double p = precision();
  double r = recall();
  return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
}

namespace {

// (match key, type) pairs of one side for `task`.
std::set<std::pair<std::string, std::string>> Keys(const GoldCorpus &corpus,
                                                   Task task) {
  std::set<std::pair<std::string, std::string>> keys;
  for (const GoldDocument &d : corpus.documents) {
    auto key = [&](std::initializer_list<std::string> parts) {
      std::string k = d.id;
      for (const std::string &p : parts) k += "\x1f" + p;
      return k;
    };
    auto n = [](int v) { return std::to_string(v); };
    switch (task) {
      case Task::kNer:
        for (const GoldEntity &e : d.entities) {
          keys.emplace(key({n(e.sentence_index), n(e.start), n(e.end), e.type}),
                       e.type);
        }
        break;
      case Task::kRe:
        for (const GoldRelation &r : d.relations) {
          keys.emplace(key({n(r.sentence_index), n(r.head_start), n(r.head_end),
                            n(r.tail_start), n(r.tail_end), r.label}),
                       r.label);
        }
        break;
      case Task::kEe:
        for (const GoldEvent &e : d.events) {
          keys.emplace(key({n(e.sentence_index), e.type}), e.type);
        }
        break;
      case Task::kEae:
        for (const GoldArgument &a : d.arguments) {
          std::string type = a.event_type + ":" + a.role;
          keys.emplace(key({n(a.sentence_index), a.event_type, n(a.start),
                            n(a.end), a.role}),
                       type);
        }
        break;
    }
  }
  return keys;
}

}  // namespace

ScoreReport score_task(const GoldCorpus &predictions, const GoldCorpus &gold,
                       Task task) {
  std::set<std::string> pred_ids, gold_ids;
  for (const GoldDocument &d : predictions.documents) pred_ids.insert(d.id);
  for (const GoldDocument &d : gold.documents) gold_ids.insert(d.id);
  if (pred_ids != gold_ids) {
    throw ValidationError("predictions and gold cover different documents");
  }

  auto predicted = Keys(predictions, task);
  auto expected = Keys(gold, task);
  ScoreReport report;
  report.task = task;
  for (const auto &[key, type] : predicted) {
    bool hit = expected.count({key, type}) > 0;
    (hit ? report.micro.tp : report.micro.fp)++;
    (hit ? report.per_type[type].tp : report.per_type[type].fp)++;
  }
  for (const auto &[key, type] : expected) {
    if (predicted.count({key, type}) == 0) {
      report.micro.fn++;
      report.per_type[type].fn++;
    }
  }
  return report;
}

json ReportToJson(const ScoreReport &report) {
  auto counts = [](const Counts &c) {
    return json{{"tp", c.tp},
                {"fp", c.fp},
                {"fn", c.fn},
                {"precision", c.precision()},
                {"recall", c.recall()},
                {"f1", c.f1()}};
  };
  json j;
  j["task"] = std::string(TaskName(report.task));
  j["micro"] = counts(report.micro);
  j["per_type"] = json::object();
  for (const auto &[type, c] : report.per_type) j["per_type"][type] = counts(c);
  j["threshold"] = report.threshold ? json(*report.threshold) : json();
  return j;
}

std::string ReportToText(const ScoreReport &report) {
  size_t width = 5;
  for (const auto &[type, _] : report.per_type) width = std::max(width, type.size());
  std::string out;
  char buf[256];
  out += "task " + std::string(TaskName(report.task));
  if (report.threshold) {
    std::snprintf(buf, sizeof(buf), "  threshold %.2f", *report.threshold);
    out += buf;
  }
  out += "\n";
  auto row = [&](const std::string &name, const Counts &c) {
    std::snprintf(buf, sizeof(buf), "%-*s %6ld %6ld %6ld %7.4f %7.4f %7.4f\n",
                  static_cast<int>(width), name.c_str(), c.tp, c.fp, c.fn,
                  c.precision(), c.recall(), c.f1());
    out += buf;
  };
  std::snprintf(buf, sizeof(buf), "%-*s %6s %6s %6s %7s %7s %7s\n",
                static_cast<int>(width), "type", "tp", "fp", "fn", "prec",
                "rec", "f1");
  out += buf;
  for (const auto &[type, c] : report.per_type) row(type, c);
  row("micro", report.micro);
  return out;
}

Counts CountsAt(const std::vector<ScoredItem> &items,
                const std::vector<GoldItem> &gold, double threshold) {
  std::set<GoldItem> expected(gold.begin(), gold.end());
  std::set<GoldItem> predicted;
  for (const ScoredItem &item : items) {
    if (item.score >= threshold) predicted.insert({item.id, item.label});
  }
  Counts c;
  for (const GoldItem &p : predicted) (expected.count(p) ? c.tp : c.fp)++;
  for (const GoldItem &g : expected) c.fn += predicted.count(g) == 0;
  return c;
}

TuneResult tune_threshold(const std::vector<ScoredItem> &items,
                          const std::vector<GoldItem> &gold, double step,
                          Task task) {
  if (items.empty()) throw Error("empty dev set");
  if (!(step > 0.0 && step <= 1.0)) throw Error("grid step must be in (0, 1]");

  // Grid points k / n when step divides 1, so 0.9 is exactly 90 / 100.
  long n = std::lround(1.0 / step);
  bool exact = std::abs(n * step - 1.0) < 1e-9;
  long points = exact ? n : static_cast<long>(std::floor(1.0 / step + 1e-9));
  auto grid = [&](long k) {
    return exact ? static_cast<double>(k) / n : std::min(1.0, k * step);
  };

  TuneResult best;
  double best_f1 = -1.0;
  for (long k = 0; k <= points; ++k) {
    double t = grid(k);
    Counts c = CountsAt(items, gold, t);
    if (c.f1() >= best_f1) {
      best_f1 = c.f1();
      best.threshold = t;
      best.report.micro = c;
    }
  }
  best.report.task = task;
  best.report.threshold = best.threshold;
  // Per-label breakdown at the chosen threshold.
  std::set<GoldItem> expected(gold.begin(), gold.end());
  std::set<GoldItem> predicted;
  for (const ScoredItem &item : items) {
    if (item.score >= best.threshold) predicted.insert({item.id, item.label});
  }
  for (const GoldItem &p : predicted) {
    (expected.count(p) ? best.report.per_type[p.label].tp
                       : best.report.per_type[p.label].fp)++;
  }
  for (const GoldItem &g : expected) {
    if (!predicted.count(g)) best.report.per_type[g.label].fn++;
  }
  return best;
}

}  // namespace zsie
