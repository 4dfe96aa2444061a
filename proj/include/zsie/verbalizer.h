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

#ifndef ZSIE_VERBALIZER_H_
#define ZSIE_VERBALIZER_H_

#include <string>
#include <vector>

#include "zsie/candidates.h"
#include "zsie/schema.h"

namespace zsie {

// A template instantiated over a candidate.
struct Hypothesis {
  std::string text;
  std::string label;        // type (or role) the hypothesis asserts
  std::string template_id;
  std::string template_text;

  bool operator==(const Hypothesis &) const = default;
};

// Replaces {X} with the primary span text and {Y} with the secondary span
// text, verbatim. Slotless templates come back unchanged. Throws
// VerbalizationError when the candidate lacks a span the template needs.
std::string instantiate(const Template &tmpl, const Candidate &candidate);

// One hypothesis per (eligible type, template), in schema declaration order
// then template order. RE and EAE types are eligible only when the
// candidate's type pair satisfies their constraints. EAE templates using
// {X} are skipped when the event has no trigger; a message is appended to
// `warnings` (if non-null) for each one.
std::vector<Hypothesis> hypotheses_for(const Candidate &candidate,
                                       const Schema &schema,
                                       std::vector<std::string> *warnings =
                                           nullptr);

}  // namespace zsie

#endif  // ZSIE_VERBALIZER_H_
