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

#include "zsie/candidates.h"

#include <algorithm>

#include "zsie/errors.h"

namespace zsie {

std::string_view TaskName(Task task) {
  switch (task) {
    case Task::kNer: return "NER";
    case Task::kRe: return "RE";
    case Task::kEe: return "EE";
    case Task::kEae: return "EAE";
  }
  return "?";
}

std::optional<Task> ParseTask(std::string_view name) {
  for (Task t : {Task::kNer, Task::kRe, Task::kEe, Task::kEae}) {
    if (TaskName(t) == name) return t;
  }
  return std::nullopt;
}

Span MakeSpan(const Sentence &sentence, int token_begin, int token_end) {
  const Token &first = sentence.tokens[token_begin];
  const Token &last = sentence.tokens[token_end - 1];
  return {sentence.index, first.start, last.end,
          sentence.text.substr(first.start, last.end - first.start)};
}

Span MakeSpanAt(const Sentence &sentence, int start, int end) {
  if (start < 0 || start >= end || end > static_cast<int>(sentence.text.size())) {
    throw ValidationError("span [" + std::to_string(start) + ", " +
                          std::to_string(end) + ") out of range for sentence " +
                          std::to_string(sentence.index));
  }
  return {sentence.index, start, end, sentence.text.substr(start, end - start)};
}

std::vector<Candidate> ner_candidates(const Sentence &sentence,
                                      std::span<const PosPattern> patterns) {
  if (patterns.empty()) patterns = std::span(&DefaultNerPattern(), 1);
  std::vector<Pos> tags;
  tags.reserve(sentence.tokens.size());
  for (const Token &t : sentence.tokens) tags.push_back(t.pos);

  std::vector<std::pair<int, int>> ranges;
  for (const PosPattern &p : patterns) {
    auto found = p.FindAll(tags);
    ranges.insert(ranges.end(), found.begin(), found.end());
  }
  std::sort(ranges.begin(), ranges.end());
  ranges.erase(std::unique(ranges.begin(), ranges.end()), ranges.end());

  std::vector<Candidate> out;
  for (const auto &r : ranges) {
    bool contained = std::any_of(ranges.begin(), ranges.end(), [&](auto &o) {
      return o != r && o.first <= r.first && r.second <= o.second;
    });
    if (contained) continue;
    Candidate c;
    c.task = Task::kNer;
    c.sentence_index = sentence.index;
    c.primary = MakeSpan(sentence, r.first, r.second);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Candidate> trigger_candidates(const Sentence &sentence,
                                          TriggerMode mode,
                                          std::span<const Pos> trigger_tags) {
  std::vector<Candidate> out;
  if (mode == TriggerMode::kSentenceLevel) {
    Candidate c;
    c.task = Task::kEe;
    c.sentence_index = sentence.index;
    out.push_back(std::move(c));
    return out;
  }
  static constexpr Pos kDefaultTags[] = {Pos::kVerb};
  if (trigger_tags.empty()) trigger_tags = kDefaultTags;
  for (int i = 0; i < static_cast<int>(sentence.tokens.size()); ++i) {
    Pos pos = sentence.tokens[i].pos;
    if (std::find(trigger_tags.begin(), trigger_tags.end(), pos) ==
        trigger_tags.end()) {
      continue;
    }
    Candidate c;
    c.task = Task::kEe;
    c.sentence_index = sentence.index;
    c.primary = MakeSpan(sentence, i, i + 1);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Candidate> relation_pair_candidates(
    std::span<const TypedSpan> entities, const Schema &schema) {
  std::vector<Candidate> out;
  for (const TypedSpan &head : entities) {
    for (const TypedSpan &tail : entities) {
      if (head.span.sentence_index != tail.span.sentence_index) continue;
      if (head.span.SameExtent(tail.span)) continue;
      std::vector<std::string> eligible;
      for (const RelationTypeDef &r : schema.relation_types) {
        if (r.Allows(head.type, tail.type)) eligible.push_back(r.name);
      }
      if (eligible.empty()) continue;
      Candidate c;
      c.task = Task::kRe;
      c.sentence_index = head.span.sentence_index;
      c.primary = head.span;
      c.secondary = tail.span;
      c.left_type = head.type;
      c.right_type = tail.type;
      c.eligible = std::move(eligible);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<Candidate> argument_candidates(const EventMention &event,
                                           std::span<const TypedSpan> entities,
                                           const Schema &schema) {
  std::vector<Candidate> out;
  auto roles = schema.RolesOf(event.type);
  if (roles.empty()) return out;
  for (const TypedSpan &filler : entities) {
    if (filler.span.sentence_index != event.sentence_index) continue;
    std::vector<std::string> eligible;
    for (const ArgumentRoleDef *role : roles) {
      if (role->AcceptsFiller(filler.type)) eligible.push_back(role->name);
    }
    if (eligible.empty()) continue;
    Candidate c;
    c.task = Task::kEae;
    c.sentence_index = event.sentence_index;
    c.primary = event.trigger;
    c.secondary = filler.span;
    c.left_type = event.type;
    c.right_type = filler.type;
    c.eligible = std::move(eligible);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace zsie
