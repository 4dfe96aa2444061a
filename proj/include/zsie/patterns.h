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

#ifndef ZSIE_PATTERNS_H_
#define ZSIE_PATTERNS_H_

#include <bitset>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zsie/text.h"

namespace zsie {

// A sequence pattern over POS tags, written as whitespace-separated
// elements. Each element is a tag or an alternation of tags ("NOUN|PROPN"),
// optionally followed by one of the quantifiers '+', '*' or '?'.
//
//   "PROPN+"            maximal runs of proper nouns
//   "NOUN PROPN+"       a common noun followed by proper nouns
//   "ADJ* NOUN|PROPN+"  optional adjectives and a nominal run
class PosPattern {
 public:
  // Throws ParseError on unknown tags or malformed elements.
  static PosPattern Parse(std::string_view source);

  const std::string &source() const { return source_; }

  // Length of the longest match starting at token `start`, or 0.
  int LongestMatch(std::span<const Pos> tags, int start) const;

  // Leftmost-longest non-overlapping matches as [begin, end) token ranges.
  std::vector<std::pair<int, int>> FindAll(std::span<const Pos> tags) const;

 private:
  enum class Quantifier { kOne, kOptional, kStar, kPlus };

  struct Element {
    std::bitset<kNumPosTags> tags;
    Quantifier quantifier = Quantifier::kOne;
  };

  std::string source_;
  std::vector<Element> elements_;
};

// The default NER pattern: maximal runs of consecutive PROPN.
const PosPattern &DefaultNerPattern();

}  // namespace zsie

#endif  // ZSIE_PATTERNS_H_
