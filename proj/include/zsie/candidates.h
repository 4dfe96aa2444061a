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

#ifndef ZSIE_CANDIDATES_H_
#define ZSIE_CANDIDATES_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zsie/patterns.h"
#include "zsie/schema.h"
#include "zsie/text.h"

namespace zsie {

enum class Task { kNer, kRe, kEe, kEae };

std::string_view TaskName(Task task);
std::optional<Task> ParseTask(std::string_view name);

// A slice [start, end) of one sentence's text.
struct Span {
  int sentence_index = 0;
  int start = 0;
  int end = 0;
  std::string text;

  // Same sentence and offsets.
  bool SameExtent(const Span &other) const {
    return sentence_index == other.sentence_index && start == other.start &&
           end == other.end;
  }

  bool operator==(const Span &) const = default;
};

// Span covering tokens [token_begin, token_end) of `sentence`.
Span MakeSpan(const Sentence &sentence, int token_begin, int token_end);

// Span at byte offsets; throws ValidationError if they are out of range.
Span MakeSpanAt(const Sentence &sentence, int start, int end);

// Something proposed for typing.
//
//   NER: primary = the mention.
//   EE:  primary = the trigger in trigger-span mode, empty at sentence level.
//   RE:  primary = head ({X}), secondary = tail ({Y}); left/right_type are
//        the entity types of the pair; eligible = admissible relations.
//   EAE: primary = the event trigger if any ({X}), secondary = the filler
//        ({Y}); left_type = event type, right_type = filler entity type;
//        eligible = roles of that event accepting the filler type.
struct Candidate {
  Task task = Task::kNer;
  int sentence_index = 0;
  std::optional<Span> primary;
  std::optional<Span> secondary;
  std::string left_type;
  std::string right_type;
  std::vector<std::string> eligible;

  bool operator==(const Candidate &) const = default;
};

// An entity mention with its type, from NER output or user gold.
struct TypedSpan {
  Span span;
  std::string type;

  bool operator==(const TypedSpan &) const = default;
};

// An event detected in a sentence, with its trigger when one was extracted.
struct EventMention {
  int sentence_index = 0;
  std::string type;
  std::optional<Span> trigger;

  bool operator==(const EventMention &) const = default;
};

// Spans matched by any of `patterns` (default: PROPN runs). Spans strictly
// contained in another match are dropped; output is ordered by offset.
std::vector<Candidate> ner_candidates(
    const Sentence &sentence, std::span<const PosPattern> patterns = {});

// One candidate per token whose tag is in `trigger_tags` (trigger-span), or
// a single sentence-level candidate.
std::vector<Candidate> trigger_candidates(
    const Sentence &sentence, TriggerMode mode,
    std::span<const Pos> trigger_tags = {});

// Every ordered pair of distinct same-sentence mentions whose types some
// relation admits, in input order.
std::vector<Candidate> relation_pair_candidates(
    std::span<const TypedSpan> entities, const Schema &schema);

// Every same-sentence mention whose type fills some role of the event.
std::vector<Candidate> argument_candidates(const EventMention &event,
                                           std::span<const TypedSpan> entities,
                                           const Schema &schema);

}  // namespace zsie

#endif  // ZSIE_CANDIDATES_H_
