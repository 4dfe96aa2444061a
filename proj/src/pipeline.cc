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

#include "zsie/pipeline.h"

#include <cstdint>
#include <cstdio>

#include "http_util.h"
#include "zsie/errors.h"
#include "zsie/json_util.h"
#include "zsie/parallel.h"
#include "zsie/verbalizer.h"

namespace zsie {

using nlohmann::json;

HttpEntitySource::HttpEntitySource(std::string base_url)
    : base_url_(std::move(base_url)) {}

std::vector<std::vector<TypedSpan>> HttpEntitySource::Recognize(
    const std::vector<Sentence> &sentences) const {
  std::vector<std::vector<TypedSpan>> out(sentences.size());
  if (sentences.empty()) return out;
  json request;
  request["sentences"] = json::array();
  for (const Sentence &s : sentences) request["sentences"].push_back(s.text);
  json response = internal::PostJson(base_url_, "/entities", request, {});
  if (!response.is_object() || !response.contains("sentences") ||
      !response["sentences"].is_array() ||
      response["sentences"].size() != sentences.size()) {
    throw ProtocolError("entities response: bad \"sentences\" array");
  }
  for (size_t i = 0; i < sentences.size(); ++i) {
    const json &ents = response["sentences"][i].value("entities", json());
    if (!ents.is_array()) throw ProtocolError("entities response: no entities");
    for (const json &e : ents) {
      if (!e.is_object() || !e.contains("start") || !e.contains("end") ||
          !e.contains("type") || !e["start"].is_number_integer() ||
          !e["end"].is_number_integer() || !e["type"].is_string()) {
        throw ProtocolError("entities response: malformed entity " + e.dump());
      }
      try {
        out[i].push_back({MakeSpanAt(sentences[i], e["start"].get<int>(),
                                     e["end"].get<int>()),
                          e["type"].get<std::string>()});
      } catch (const ValidationError &err) {
        throw ProtocolError(std::string("entities response: ") + err.what());
      }
    }
  }
  return out;
}

GoldSpans GoldSpansFromJson(const json &doc) {
  const std::string path = "gold";
  RequireObject(doc, path);
  RejectUnknownKeys(doc, {"entities", "triggers"}, path);
  GoldSpans gold;
  if (doc.contains("entities")) {
    const json &list = RequireArray(doc, "entities", path);
    for (size_t i = 0; i < list.size(); ++i) {
      std::string p = path + ".entities[" + std::to_string(i) + "]";
      const json &e = RequireObject(list[i], p);
      RejectUnknownKeys(e, {"sentence", "start", "end", "type"}, p);
      gold.entities.push_back({static_cast<int>(RequireInt(e, "sentence", p)),
                               static_cast<int>(RequireInt(e, "start", p)),
                               static_cast<int>(RequireInt(e, "end", p)),
                               RequireString(e, "type", p)});
    }
  }
  if (doc.contains("triggers")) {
    const json &list = RequireArray(doc, "triggers", path);
    for (size_t i = 0; i < list.size(); ++i) {
      std::string p = path + ".triggers[" + std::to_string(i) + "]";
      const json &t = RequireObject(list[i], p);
      RejectUnknownKeys(t, {"sentence", "start", "end", "type"}, p);
      GoldTrigger trigger;
      trigger.sentence_index = static_cast<int>(RequireInt(t, "sentence", p));
      trigger.type = RequireString(t, "type", p);
      if (t.contains("start") || t.contains("end")) {
        trigger.span = {static_cast<int>(RequireInt(t, "start", p)),
                        static_cast<int>(RequireInt(t, "end", p))};
      }
      gold.triggers.push_back(std::move(trigger));
    }
  }
  return gold;
}

json GoldSpansToJson(const GoldSpans &gold) {
  json doc;
  doc["entities"] = json::array();
  for (const GoldEntity &e : gold.entities) {
    doc["entities"].push_back({{"sentence", e.sentence_index},
                               {"start", e.start},
                               {"end", e.end},
                               {"type", e.type}});
  }
  doc["triggers"] = json::array();
  for (const GoldTrigger &t : gold.triggers) {
    json j = {{"sentence", t.sentence_index}, {"type", t.type}};
    if (t.span) {
      j["start"] = t.span->first;
      j["end"] = t.span->second;
    }
    doc["triggers"].push_back(std::move(j));
  }
  return doc;
}

GoldSpans GoldFromAnnotations(const DocumentAnnotations &doc) {
  GoldSpans gold;
  for (const Extraction &e : doc.entities) {
    const Span &s = *e.candidate.primary;
    gold.entities.push_back({s.sentence_index, s.start, s.end, e.label});
  }
  for (const Extraction &e : doc.events) {
    GoldTrigger t{e.candidate.sentence_index, e.label, std::nullopt};
    if (e.candidate.primary) {
      t.span = {e.candidate.primary->start, e.candidate.primary->end};
    }
    gold.triggers.push_back(std::move(t));
  }
  return gold;
}

std::vector<const Extraction *> DocumentAnnotations::AllExtractions() const {
  std::vector<const Extraction *> out;
  for (const auto *list : {&entities, &events, &relations, &arguments}) {
    for (const Extraction &e : *list) out.push_back(&e);
  }
  return out;
}

std::string DocumentId(std::string_view text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string SpanKey(const std::optional<Span> &s) {
  if (!s) return "-";
  return std::to_string(s->start) + "-" + std::to_string(s->end);
}

std::string ExtractionId(const std::string &doc_id, const Extraction &e) {
  const Candidate &c = e.candidate;
  std::string id = doc_id + "/" + std::string(TaskName(c.task)) + "/" +
                   std::to_string(c.sentence_index) + "/";
  switch (c.task) {
    case Task::kNer:
      return id + SpanKey(c.primary);
    case Task::kEe:
      return id + SpanKey(c.primary) + "/" + e.best_type;
    case Task::kRe:
      return id + SpanKey(c.primary) + ">" + SpanKey(c.secondary);
    case Task::kEae:
      return id + c.left_type + "@" + SpanKey(c.primary) + "/" +
             SpanKey(c.secondary);
  }
  return id;
}

// Results of one stage over one sentence.
struct Partial {
  std::vector<Extraction> positives;
  std::vector<Extraction> negatives;
  std::vector<std::string> warnings;
};

class Runner {
 public:
  Runner(const Schema &schema, const RunConfig &config,
         const Backends &backends)
      : schema_(schema),
        config_(config),
        backends_(backends),
        patterns_(config.CompiledPatterns()) {
    if (backends_.entailment == nullptr) {
      throw ConfigurationError("no entailment backend");
    }
    if (backends_.tagger == nullptr) backends_.tagger = &rule_tagger_;
  }

  void Start(DocumentAnnotations *doc, std::string_view text,
             std::string mode, std::optional<Task> task) {
    doc->text = std::string(text);
    doc->doc_id = DocumentId(text);
    doc->provenance = {std::move(mode), task, RunConfigToJson(config_),
                       schema_.version};
    doc_id_ = doc->doc_id;
  }

  std::vector<Sentence> Tag(std::vector<Sentence> sentences) const {
    return backends_.tagger->Tag(std::move(sentences));
  }

  Partial Ner(const Sentence &s) const {
    return ClassifySingle(s, ner_candidates(s, patterns_));
  }

  Partial Ee(const Sentence &s) const {
    bool sentence_level = false;
    bool trigger_span = false;
    for (const EventTypeDef &e : schema_.event_types) {
      (e.trigger_mode == TriggerMode::kSentenceLevel ? sentence_level
                                                     : trigger_span) = true;
    }
    std::vector<Candidate> candidates;
    if (sentence_level) {
      candidates = trigger_candidates(s, TriggerMode::kSentenceLevel);
    }
    if (trigger_span) {
      auto triggers =
          trigger_candidates(s, TriggerMode::kTriggerSpan, config_.trigger_tags);
      candidates.insert(candidates.end(), triggers.begin(), triggers.end());
    }

    Partial out;
    std::vector<std::vector<Hypothesis>> hyps;
    std::vector<double> entail = Score(s, candidates, &hyps, &out.warnings);
    double threshold = config_.inference.ThresholdFor(Task::kEe);
    size_t offset = 0;
    for (size_t i = 0; i < candidates.size(); ++i) {
      std::span<const double> slice(entail.data() + offset, hyps[i].size());
      offset += hyps[i].size();
      for (Extraction &e : ScoreEvents(s.text, candidates[i], hyps[i], slice)) {
        e.id = ExtractionId(doc_id_, e);
        if (e.score >= threshold) {
          out.positives.push_back(std::move(e));
        } else {
          e.label = std::string(kNegativeLabel);
          out.negatives.push_back(std::move(e));
        }
      }
    }
    return out;
  }

  Partial Re(const Sentence &s, const std::vector<TypedSpan> &entities) const {
    return ClassifySingle(s, relation_pair_candidates(entities, schema_));
  }

  Partial Eae(const Sentence &s, const std::vector<EventMention> &events,
              const std::vector<TypedSpan> &entities) const {
    std::vector<Candidate> candidates;
    for (const EventMention &ev : events) {
      auto args = argument_candidates(ev, entities, schema_);
      candidates.insert(candidates.end(), args.begin(), args.end());
    }
    return ClassifySingle(s, candidates);
  }

  int jobs() const { return config_.jobs; }
  const RunConfig &config() const { return config_; }
  const Backends &backends() const { return backends_; }

 private:
  // Verbalizes all candidates and scores every hypothesis of the sentence
  // in one backend call. Returns entailment probabilities in hypothesis
  // order; (*hyps)[i] holds candidate i's hypotheses.
  std::vector<double> Score(const Sentence &s,
                            const std::vector<Candidate> &candidates,
                            std::vector<std::vector<Hypothesis>> *hyps,
                            std::vector<std::string> *warnings) const {
    std::vector<std::string> texts;
    for (const Candidate &c : candidates) {
      hyps->push_back(hypotheses_for(c, schema_, warnings));
      for (const Hypothesis &h : hyps->back()) texts.push_back(h.text);
    }
    std::vector<double> entail;
    if (texts.empty()) return entail;
    auto scores = backends_.entailment->entail_batch(s.text, texts);
    if (scores.size() != texts.size()) {
      throw ProtocolError("backend returned " + std::to_string(scores.size()) +
                          " scores for " + std::to_string(texts.size()) +
                          " hypotheses");
    }
    for (const EntailmentScore &sc : scores) entail.push_back(sc.entail);
    return entail;
  }

  Partial ClassifySingle(const Sentence &s,
                         const std::vector<Candidate> &candidates) const {
    Partial out;
    std::vector<std::vector<Hypothesis>> hyps;
    std::vector<double> entail = Score(s, candidates, &hyps, &out.warnings);
    if (candidates.empty()) return out;
    double threshold = config_.inference.ThresholdFor(candidates[0].task);
    size_t offset = 0;
    for (size_t i = 0; i < candidates.size(); ++i) {
      std::span<const double> slice(entail.data() + offset, hyps[i].size());
      offset += hyps[i].size();
      Extraction e =
          DecideCandidate(s.text, candidates[i], hyps[i], slice, threshold);
      e.id = ExtractionId(doc_id_, e);
      (e.positive() ? out.positives : out.negatives).push_back(std::move(e));
    }
    return out;
  }

  const Schema &schema_;
  const RunConfig &config_;
  Backends backends_;
  RuleTagger rule_tagger_;
  std::vector<PosPattern> patterns_;
  std::string doc_id_;
};

// Runs `stage` over every sentence and appends the results to `doc`.
template <typename Stage>
void RunStage(const Runner &runner, DocumentAnnotations *doc,
              std::vector<Extraction> *into, Stage stage) {
  auto partials = ParallelMap(doc->sentences.size(), runner.jobs(),
                              [&](size_t i) { return stage(doc->sentences[i]); });
  for (Partial &p : partials) {
    for (Extraction &e : p.positives) into->push_back(std::move(e));
    if (runner.config().keep_negatives) {
      for (Extraction &e : p.negatives) doc->negatives.push_back(std::move(e));
    }
    for (std::string &w : p.warnings) doc->warnings.push_back(std::move(w));
  }
}

std::vector<TypedSpan> EntitiesOf(const std::vector<Extraction> &extractions) {
  std::vector<TypedSpan> out;
  for (const Extraction &e : extractions) {
    out.push_back({*e.candidate.primary, e.label});
  }
  return out;
}

std::vector<EventMention> EventsOf(const std::vector<Extraction> &extractions) {
  std::vector<EventMention> out;
  for (const Extraction &e : extractions) {
    out.push_back({e.candidate.sentence_index, e.label, e.candidate.primary});
  }
  return out;
}

template <typename T>
std::vector<T> InSentence(const std::vector<T> &items, int sentence) {
  std::vector<T> out;
  for (const T &item : items) {
    int index;
    if constexpr (std::is_same_v<T, TypedSpan>) {
      index = item.span.sentence_index;
    } else {
      index = item.sentence_index;
    }
    if (index == sentence) out.push_back(item);
  }
  return out;
}

const Sentence &SentenceAt(const DocumentAnnotations &doc, int index) {
  if (index < 0 || index >= static_cast<int>(doc.sentences.size())) {
    throw ValidationError("gold span refers to sentence " +
                          std::to_string(index) + " but the text has " +
                          std::to_string(doc.sentences.size()));
  }
  return doc.sentences[index];
}

void ApplyGold(const GoldSpans &gold, DocumentAnnotations *doc) {
  for (const GoldEntity &e : gold.entities) {
    doc->gold_entities.push_back(
        {MakeSpanAt(SentenceAt(*doc, e.sentence_index), e.start, e.end),
         e.type});
  }
  for (const GoldTrigger &t : gold.triggers) {
    EventMention ev{t.sentence_index, t.type, std::nullopt};
    const Sentence &s = SentenceAt(*doc, t.sentence_index);
    if (t.span) ev.trigger = MakeSpanAt(s, t.span->first, t.span->second);
    doc->gold_events.push_back(std::move(ev));
  }
}

// Entities from the external recognizer, shaped as NER extractions.
std::vector<Extraction> ServiceEntities(const Runner &runner,
                                        const DocumentAnnotations &doc) {
  const EntitySource *source = runner.backends().entity_source;
  if (source == nullptr) {
    throw ConfigurationError("entity_source \"service\" but no entity service");
  }
  auto found = source->Recognize(doc.sentences);
  std::vector<Extraction> out;
  for (size_t i = 0; i < found.size(); ++i) {
    for (TypedSpan &t : found[i]) {
      Extraction e;
      e.task = Task::kNer;
      e.premise = doc.sentences[i].text;
      e.candidate.task = Task::kNer;
      e.candidate.sentence_index = static_cast<int>(i);
      e.candidate.primary = t.span;
      e.label = t.type;
      e.best_type = t.type;
      e.score = 1.0;
      e.type_scores = {{t.type, 1.0, ""}};
      e.id = ExtractionId(doc.doc_id, e);
      out.push_back(std::move(e));
    }
  }
  return out;
}

void Fail(DocumentAnnotations *doc, const std::exception &e) {
  doc->complete = false;
  doc->error = e.what();
}

void RunRelations(const Runner &runner, DocumentAnnotations *doc,
                  const std::vector<TypedSpan> &entities) {
  RunStage(runner, doc, &doc->relations, [&](const Sentence &s) {
    return runner.Re(s, InSentence(entities, s.index));
  });
}

void RunArguments(const Runner &runner, DocumentAnnotations *doc,
                  const std::vector<EventMention> &events,
                  const std::vector<TypedSpan> &entities) {
  RunStage(runner, doc, &doc->arguments, [&](const Sentence &s) {
    return runner.Eae(s, InSentence(events, s.index),
                      InSentence(entities, s.index));
  });
}

// Upstream entities for task mode without gold.
std::vector<TypedSpan> UpstreamEntities(const Runner &runner,
                                        DocumentAnnotations *doc, Task task) {
  const auto &source = runner.config().entity_source;
  if (!source) {
    throw ConfigurationError(std::string(TaskName(task)) +
                             " needs gold entities or a configured "
                             "entity_source");
  }
  std::vector<Extraction> entities;
  if (*source == EntitySourceKind::kService) {
    entities = ServiceEntities(runner, *doc);
  } else {
    DocumentAnnotations scratch;
    scratch.sentences = doc->sentences;
    RunStage(runner, &scratch, &entities,
             [&](const Sentence &s) { return runner.Ner(s); });
  }
  return EntitiesOf(entities);
}

void RunTaskOnTagged(const Runner &runner, Task task,
                     const std::optional<GoldSpans> &gold,
                     DocumentAnnotations *doc) {
  if (gold) ApplyGold(*gold, doc);
  // Configuration problems surface before any backend call.
  if ((task == Task::kRe || task == Task::kEae) && !gold &&
      !runner.config().entity_source) {
    throw ConfigurationError(std::string(TaskName(task)) +
                             " needs gold entities or a configured "
                             "entity_source");
  }
  try {
    switch (task) {
      case Task::kNer:
        RunStage(runner, doc, &doc->entities,
                 [&](const Sentence &s) { return runner.Ner(s); });
        break;
      case Task::kEe:
        RunStage(runner, doc, &doc->events,
                 [&](const Sentence &s) { return runner.Ee(s); });
        break;
      case Task::kRe: {
        auto entities = gold ? doc->gold_entities
                             : UpstreamEntities(runner, doc, task);
        RunRelations(runner, doc, entities);
        break;
      }
      case Task::kEae: {
        std::vector<EventMention> events;
        if (gold) {
          events = doc->gold_events;
        } else {
          std::vector<Extraction> detected;
          DocumentAnnotations scratch;
          scratch.sentences = doc->sentences;
          RunStage(runner, &scratch, &detected,
                   [&](const Sentence &s) { return runner.Ee(s); });
          events = EventsOf(detected);
        }
        auto entities = gold ? doc->gold_entities
                             : UpstreamEntities(runner, doc, task);
        RunArguments(runner, doc, events, entities);
        break;
      }
    }
  } catch (const TransportError &e) {
    Fail(doc, e);
  }
}

}  // namespace

DocumentAnnotations run_e2e(std::string_view text, const Schema &schema,
                            const RunConfig &config, const Backends &backends) {
  Runner runner(schema, config, backends);
  DocumentAnnotations doc;
  runner.Start(&doc, text, "e2e", std::nullopt);
  auto source = config.entity_source.value_or(EntitySourceKind::kEntailment);
  if (source == EntitySourceKind::kService &&
      backends.entity_source == nullptr) {
    throw ConfigurationError("entity_source \"service\" but no entity service");
  }
  try {
    doc.sentences = runner.Tag(segment_and_tokenize(text));
    if (source == EntitySourceKind::kService) {
      doc.entities = ServiceEntities(runner, doc);
    } else {
      RunStage(runner, &doc, &doc.entities,
               [&](const Sentence &s) { return runner.Ner(s); });
    }
    RunStage(runner, &doc, &doc.events,
             [&](const Sentence &s) { return runner.Ee(s); });
    auto entities = EntitiesOf(doc.entities);
    if (!schema.relation_types.empty()) RunRelations(runner, &doc, entities);
    if (!schema.argument_roles.empty()) {
      RunArguments(runner, &doc, EventsOf(doc.events), entities);
    }
  } catch (const TransportError &e) {
    Fail(&doc, e);
  }
  return doc;
}

DocumentAnnotations run_task(Task task, std::string_view text,
                             const std::optional<GoldSpans> &gold,
                             const Schema &schema, const RunConfig &config,
                             const Backends &backends) {
  Runner runner(schema, config, backends);
  DocumentAnnotations doc;
  runner.Start(&doc, text, "task", task);
  try {
    doc.sentences = runner.Tag(segment_and_tokenize(text));
  } catch (const TransportError &e) {
    Fail(&doc, e);
    return doc;
  }
  RunTaskOnTagged(runner, task, gold, &doc);
  return doc;
}

DocumentAnnotations run_task_on_sentences(
    Task task, const std::vector<std::string> &sentences,
    const std::optional<GoldSpans> &gold, const Schema &schema,
    const RunConfig &config, const Backends &backends) {
  Runner runner(schema, config, backends);
  std::string text;
  std::vector<Sentence> split;
  for (size_t i = 0; i < sentences.size(); ++i) {
    Sentence s = tokenize_sentence(sentences[i], static_cast<int>(i));
    s.text_offset = s.doc_begin = static_cast<int>(text.size());
    text += sentences[i];
    if (i + 1 < sentences.size()) text += '\n';
    s.doc_end = static_cast<int>(text.size());
    split.push_back(std::move(s));
  }
  DocumentAnnotations doc;
  runner.Start(&doc, text, "task", task);
  try {
    doc.sentences = runner.Tag(std::move(split));
  } catch (const TransportError &e) {
    Fail(&doc, e);
    return doc;
  }
  RunTaskOnTagged(runner, task, gold, &doc);
  return doc;
}

OwnedBackends MakeBackends(const RunConfig &config) {
  OwnedBackends out;
  HttpEntailmentBackend::Options options;
  options.max_batch = config.max_batch;
  options.max_in_flight = config.max_in_flight;
  out.entailment = MakeBackend(config.backend, options);
  if (!config.tagger.empty()) {
    out.tagger = std::make_shared<HttpTagger>(config.tagger);
  }
  if (config.entity_source == EntitySourceKind::kService) {
    if (config.entity_service.empty()) {
      throw ConfigurationError(
          "entity_source \"service\" needs entity_service to be set");
    }
    out.entity_source = std::make_shared<HttpEntitySource>(config.entity_service);
  }
  return out;
}

}  // namespace zsie
