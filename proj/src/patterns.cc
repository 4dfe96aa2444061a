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

#include "zsie/patterns.h"

#include <algorithm>
#include <sstream>

#include "zsie/errors.h"

namespace zsie {

PosPattern PosPattern::Parse(std::string_view source) {
  PosPattern pattern;
  pattern.source_ = std::string(source);
  std::istringstream in{std::string(source)};
  std::string word;
  while (in >> word) {
    Element element;
    char last = word.back();
    if (last == '+' || last == '*' || last == '?') {
      element.quantifier = last == '+'   ? Quantifier::kPlus
                           : last == '*' ? Quantifier::kStar
                                         : Quantifier::kOptional;
      word.pop_back();
    }
    if (word.size() >= 2 && word.front() == '(' && word.back() == ')') {
      word = word.substr(1, word.size() - 2);
    }
    if (word.empty()) {
      throw ParseError("pattern \"" + pattern.source_ + "\": empty element");
    }
    size_t begin = 0;
    while (begin <= word.size()) {
      size_t bar = word.find('|', begin);
      if (bar == std::string::npos) bar = word.size();
      auto pos = ParsePos(std::string_view(word).substr(begin, bar - begin));
      if (!pos) {
        throw ParseError("pattern \"" + pattern.source_ + "\": unknown tag \"" +
                         word.substr(begin, bar - begin) + "\"");
      }
      element.tags.set(static_cast<int>(*pos));
      begin = bar + 1;
    }
    pattern.elements_.push_back(element);
  }
  if (pattern.elements_.empty()) {
    throw ParseError("empty POS pattern");
  }
  return pattern;
}

int PosPattern::LongestMatch(std::span<const Pos> tags, int start) const {
  const int n = static_cast<int>(tags.size());
  const int m = static_cast<int>(elements_.size());
  // best[e][p]: furthest end reachable matching elements e.. from token p,
  // or -1 when they cannot match there.
  std::vector<std::vector<int>> best(m + 1, std::vector<int>(n + 1, -1));
  for (int p = start; p <= n; ++p) best[m][p] = p;
  for (int e = m - 1; e >= 0; --e) {
    const Element &el = elements_[e];
    auto accepts = [&](int p) {
      return p < n && el.tags.test(static_cast<int>(tags[p]));
    };
    for (int p = n; p >= start; --p) {
      int result = -1;
      switch (el.quantifier) {
        case Quantifier::kOne:
          if (accepts(p)) result = best[e + 1][p + 1];
          break;
        case Quantifier::kOptional:
          result = best[e + 1][p];
          if (accepts(p)) result = std::max(result, best[e + 1][p + 1]);
          break;
        case Quantifier::kStar:
        case Quantifier::kPlus: {
          if (el.quantifier == Quantifier::kStar) result = best[e + 1][p];
          for (int q = p; accepts(q); ++q) {
            result = std::max(result, best[e + 1][q + 1]);
          }
          break;
        }
      }
      best[e][p] = result;
    }
  }
  int end = best[0][start];
  return end > start ? end - start : 0;
}

std::vector<std::pair<int, int>> PosPattern::FindAll(
    std::span<const Pos> tags) const {
  std::vector<std::pair<int, int>> matches;
  const int n = static_cast<int>(tags.size());
  int i = 0;
  while (i < n) {
    int len = LongestMatch(tags, i);
    if (len > 0) {
      matches.emplace_back(i, i + len);
      i += len;
    } else {
      ++i;
    }
  }
  return matches;
}

const PosPattern &DefaultNerPattern() {
  static const PosPattern kPattern = PosPattern::Parse("PROPN+");
  return kPattern;
}

}  // namespace zsie
