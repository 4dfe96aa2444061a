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

#ifndef ZSIE_TEXT_H_
#define ZSIE_TEXT_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zsie {

// Universal coarse part-of-speech tags.
enum class Pos {
  kOther = 0,
  kPropn,
  kNoun,
  kVerb,
  kAdj,
  kAdv,
  kNum,
  kPron,
  kDet,
  kAdp,
  kAux,
  kPunct,
};

inline constexpr int kNumPosTags = 12;

std::string_view PosName(Pos pos);
std::optional<Pos> ParsePos(std::string_view name);

// A token inside a sentence. Offsets are UTF-8 byte offsets into the
// sentence text, end exclusive.
struct Token {
  std::string text;
  int start = 0;
  int end = 0;
  Pos pos = Pos::kOther;

  bool operator==(const Token &) const = default;
};

// A sentence of a document. `text` is the trimmed sentence used as premise;
// it starts at `text_offset` in the document. [doc_begin, doc_end) is the
// extent of the document owned by this sentence, including surrounding
// whitespace; the extents of all sentences partition the document.
struct Sentence {
  int index = 0;
  std::string text;
  std::vector<Token> tokens;
  int text_offset = 0;
  int doc_begin = 0;
  int doc_end = 0;

  bool operator==(const Sentence &) const = default;
};

// Splits into sentences and tokens. Tokens are whitespace-separated chunks
// with leading and trailing punctuation peeled off one character at a time,
// except that a trailing period stays attached to a known abbreviation
// ("Corp.", "Mr.", "U.S.", ...). A sentence ends after a '.', '!' or '?'
// token that is followed by whitespace and an uppercase letter. POS tags are
// left unset (kOther).
std::vector<Sentence> segment_and_tokenize(std::string_view text);

// Tokenizes a single sentence without segmenting it.
Sentence tokenize_sentence(std::string_view text, int index = 0);

bool IsAbbreviation(std::string_view word);

// Source of POS tags. Implementations must be safe for concurrent calls.
class TaggerBackend {
 public:
  virtual ~TaggerBackend() = default;

  // Returns `sentences` with POS tags assigned to every token. A backend
  // may re-tokenize; the returned tokens must still satisfy the Token
  // invariants against each sentence's text.
  virtual std::vector<Sentence> Tag(std::vector<Sentence> sentences) const = 0;
};

// Deterministic rule-based tagger: closed-class lexicon, suffix rules,
// digits, and capitalization. Used for tests and offline runs.
class RuleTagger : public TaggerBackend {
 public:
  std::vector<Sentence> Tag(std::vector<Sentence> sentences) const override;

  // Tags the tokens of one sentence in place.
  void TagTokens(std::vector<Token> *tokens) const;
};

// Client for an external tagger speaking the /tag wire protocol.
class HttpTagger : public TaggerBackend {
 public:
  struct Options {
    int timeout_ms = 30000;
    int max_attempts = 3;
    int backoff_ms = 100;
  };

  explicit HttpTagger(std::string base_url);
  HttpTagger(std::string base_url, Options options);

  std::vector<Sentence> Tag(std::vector<Sentence> sentences) const override;

 private:
  std::string base_url_;
  Options options_;
};

Sentence pos_tag(Sentence sentence, const TaggerBackend &tagger);

// Segments, tokenizes, and tags a document.
std::vector<Sentence> Preprocess(std::string_view text,
                                 const TaggerBackend &tagger);

}  // namespace zsie

#endif  // ZSIE_TEXT_H_
