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

#include "zsie/text.h"

#include <algorithm>
#include <array>
#include <unordered_map>
#include <unordered_set>

#include "http_util.h"
#include "json.hpp"
#include "zsie/errors.h"

namespace zsie {

namespace {

constexpr std::array<std::string_view, kNumPosTags> kPosNames = {
    "OTHER", "PROPN", "NOUN", "VERB", "ADJ",  "ADV",
    "NUM",   "PRON",  "DET",  "ADP",  "AUX", "PUNCT",
};

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsPunct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (IsUpper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

const std::unordered_set<std::string_view> &Abbreviations() {
  static const std::unordered_set<std::string_view> kSet = {
      "Corp.", "Inc.",  "Ltd.",  "Co.",   "Bros.", "Mr.",   "Mrs.", "Ms.",
      "Dr.",   "Prof.", "Jr.",   "Sr.",   "St.",   "Gen.",  "Sen.", "Rep.",
      "Gov.",  "U.S.",  "U.K.",  "U.N.",  "e.g.",  "i.e.",  "etc.", "vs.",
      "Jan.",  "Feb.",  "Mar.",  "Apr.",  "Aug.",  "Sep.",  "Sept.", "Oct.",
      "Nov.",  "Dec.",  "No.",   "Mt.",   "Ave.",  "Dept.", "Univ.",
  };
  return kSet;
}

// Closed-class words, looked up in lowercase.
const std::unordered_map<std::string_view, Pos> &Lexicon() {
  static const std::unordered_map<std::string_view, Pos> kLexicon = [] {
    std::unordered_map<std::string_view, Pos> m;
    for (auto w : {"the", "a", "an", "this", "that", "these", "those",
                   "every", "each", "any", "no", "some", "all", "both",
                   "either", "neither", "another"}) {
      m.emplace(w, Pos::kDet);
    }
    for (auto w : {"in", "on", "at", "of", "for", "with", "by", "from", "to",
                   "into", "onto", "over", "under", "about", "after", "before",
                   "during", "between", "through", "near", "without", "within",
                   "against", "among", "across", "behind", "since", "until",
                   "upon", "via", "per", "toward", "towards", "as"}) {
      m.emplace(w, Pos::kAdp);
    }
    for (auto w : {"i", "you", "he", "she", "it", "we", "they", "me", "him",
                   "her", "us", "them", "my", "your", "his", "its", "our",
                   "their", "mine", "yours", "hers", "ours", "theirs",
                   "someone", "somebody", "anyone", "anybody", "everyone",
                   "everybody", "no-one", "nobody", "something", "anything",
                   "everything", "nothing", "who", "whom", "whose", "which",
                   "what", "himself", "herself", "itself", "themselves"}) {
      m.emplace(w, Pos::kPron);
    }
    for (auto w : {"is", "are", "was", "were", "be", "been", "being", "am",
                   "has", "have", "had", "having", "do", "does", "did",
                   "will", "would", "can", "could", "should", "may", "might",
                   "must", "shall"}) {
      m.emplace(w, Pos::kAux);
    }
    for (auto w : {"not", "very", "also", "never", "always", "often", "here",
                   "there", "now", "then", "soon", "already", "still", "just",
                   "too", "again", "yesterday", "today", "tomorrow", "ago"}) {
      m.emplace(w, Pos::kAdv);
    }
    for (auto w : {"and", "or", "but", "nor", "yet", "so", "if", "because",
                   "while", "although", "though", "when", "where", "than"}) {
      m.emplace(w, Pos::kOther);
    }
    return m;
  }();
  return kLexicon;
}

// Proper nouns recognizable even in sentence-initial position.
const std::unordered_set<std::string_view> &ProperNounLexicon() {
  static const std::unordered_set<std::string_view> kSet = {
      "monday",  "tuesday",  "wednesday", "thursday", "friday",
      "saturday", "sunday",  "january",   "february", "march",
      "april",   "june",     "july",      "august",   "september",
      "october", "november", "december",
  };
  return kSet;
}

// Frequent irregular past-tense verbs the suffix rules miss.
const std::unordered_set<std::string_view> &VerbLexicon() {
  static const std::unordered_set<std::string_view> kSet = {
      "said", "says", "went", "came", "made", "took", "gave", "left",
      "met",  "won",  "lost", "got",  "fled", "shot", "told", "began",
      "became", "held", "built", "sold", "bought", "wrote", "ran", "saw",
      "knew", "found", "paid", "led", "struck", "fell", "hit", "dies",
      "die",  "kill", "kills", "born",
  };
  return kSet;
}

struct RawToken {
  int start;
  int end;
};

std::vector<RawToken> Tokenize(std::string_view text) {
  std::vector<RawToken> tokens;
  const int n = static_cast<int>(text.size());
  int i = 0;
  while (i < n) {
    while (i < n && IsSpace(text[i])) ++i;
    if (i >= n) break;
    int a = i;
    while (i < n && !IsSpace(text[i])) ++i;
    int b = i;

    // Leading punctuation, one token per character.
    while (a < b && IsPunct(text[a])) {
      tokens.push_back({a, a + 1});
      ++a;
    }
    // Trailing punctuation, collected right to left.
    std::vector<RawToken> trailing;
    while (b > a && IsPunct(text[b - 1])) {
      if (text[b - 1] == '.' && IsAbbreviation(text.substr(a, b - a))) break;
      trailing.push_back({b - 1, b});
      --b;
    }
    if (a < b) tokens.push_back({a, b});
    tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
  }
  return tokens;
}

bool IsTerminal(std::string_view tok) {
  return tok == "." || tok == "!" || tok == "?";
}

bool IsCloser(std::string_view tok) {
  return tok == "\"" || tok == "'" || tok == ")" || tok == "]";
}

bool AllPunct(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), IsPunct);
}

bool Capitalized(std::string_view s) { return !s.empty() && IsUpper(s[0]); }

bool AllCaps(std::string_view s) {
  int letters = 0;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') return false;
    if (IsUpper(c)) ++letters;
  }
  return letters >= 2;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

Sentence MakeSentence(std::string_view doc, const std::vector<RawToken> &raw,
                      size_t first, size_t last, int index) {
  Sentence s;
  s.index = index;
  s.text_offset = raw[first].start;
  int end = raw[last - 1].end;
  s.text = std::string(doc.substr(s.text_offset, end - s.text_offset));
  for (size_t k = first; k < last; ++k) {
    Token t;
    t.start = raw[k].start - s.text_offset;
    t.end = raw[k].end - s.text_offset;
    t.text = std::string(doc.substr(raw[k].start, raw[k].end - raw[k].start));
    s.tokens.push_back(std::move(t));
  }
  return s;
}

}  // namespace

std::string_view PosName(Pos pos) {
  return kPosNames[static_cast<int>(pos)];
}

std::optional<Pos> ParsePos(std::string_view name) {
  for (int i = 0; i < kNumPosTags; ++i) {
    if (kPosNames[i] == name) return static_cast<Pos>(i);
  }
  return std::nullopt;
}

bool IsAbbreviation(std::string_view word) {
  return Abbreviations().count(word) > 0;
}

std::vector<Sentence> segment_and_tokenize(std::string_view text) {
  std::vector<RawToken> raw = Tokenize(text);
  std::vector<Sentence> sentences;
  size_t first = 0;
  for (size_t k = 0; k < raw.size(); ++k) {
    bool boundary = false;
    if (k + 1 < raw.size()) {
      std::string_view tok = text.substr(raw[k].start, raw[k].end - raw[k].start);
      bool ends = IsTerminal(tok);
      // A closing quote or bracket glued to the terminal stays with it.
      if (!ends && IsCloser(tok) && k > first && raw[k - 1].end == raw[k].start) {
        std::string_view prev =
            text.substr(raw[k - 1].start, raw[k - 1].end - raw[k - 1].start);
        ends = IsTerminal(prev);
      }
      boundary = ends && raw[k + 1].start > raw[k].end &&
                 IsUpper(text[raw[k + 1].start]);
    } else {
      boundary = true;
    }
    if (boundary) {
      sentences.push_back(MakeSentence(text, raw, first, k + 1,
                                       static_cast<int>(sentences.size())));
      first = k + 1;
    }
  }
  // Extents: each sentence owns everything up to the next sentence.
  for (size_t i = 0; i < sentences.size(); ++i) {
    sentences[i].doc_begin = i == 0 ? 0 : sentences[i - 1].doc_end;
    sentences[i].doc_end = i + 1 < sentences.size()
                               ? sentences[i + 1].text_offset
                               : static_cast<int>(text.size());
  }
  return sentences;
}

Sentence tokenize_sentence(std::string_view text, int index) {
  std::vector<RawToken> raw = Tokenize(text);
  Sentence s;
  if (!raw.empty()) s = MakeSentence(text, raw, 0, raw.size(), index);
  // Keep offsets relative to the original string, untrimmed.
  for (Token &t : s.tokens) {
    t.start += s.text_offset;
    t.end += s.text_offset;
  }
  s.index = index;
  s.text = std::string(text);
  s.text_offset = 0;
  s.doc_begin = 0;
  s.doc_end = static_cast<int>(text.size());
  return s;
}

void RuleTagger::TagTokens(std::vector<Token> *tokens) const {
  const auto &lexicon = Lexicon();
  size_t initial = 0;
  while (initial < tokens->size() && AllPunct((*tokens)[initial].text)) {
    ++initial;
  }

  for (size_t i = 0; i < tokens->size(); ++i) {
    Token &tok = (*tokens)[i];
    const std::string &w = tok.text;
    if (AllPunct(w)) {
      tok.pos = Pos::kPunct;
      continue;
    }
    if (IsDigit(w[0])) {
      tok.pos = Pos::kNum;
      continue;
    }
    const bool sentence_initial = i == initial;
    const bool capitalized = Capitalized(w);
    if (capitalized && !sentence_initial && AllCaps(w)) {
      tok.pos = Pos::kPropn;
      continue;
    }
    std::string lower = Lower(w);
    if (auto it = lexicon.find(lower); it != lexicon.end()) {
      tok.pos = it->second;
      continue;
    }
    if (capitalized) {
      if (!sentence_initial) {
        tok.pos = Pos::kPropn;
        continue;
      }
      bool next_capitalized = i + 1 < tokens->size() &&
                              Capitalized((*tokens)[i + 1].text);
      if (next_capitalized || ProperNounLexicon().count(lower) > 0) {
        tok.pos = Pos::kPropn;
        continue;
      }
    }
    if (VerbLexicon().count(lower) > 0) {
      tok.pos = Pos::kVerb;
    } else if ((EndsWith(lower, "ing") && lower.size() >= 5) ||
               (EndsWith(lower, "ed") && lower.size() >= 4)) {
      tok.pos = Pos::kVerb;
    } else if (EndsWith(lower, "ly") && lower.size() >= 4) {
      tok.pos = Pos::kAdv;
    } else {
      tok.pos = Pos::kNoun;
    }
  }
}

std::vector<Sentence> RuleTagger::Tag(std::vector<Sentence> sentences) const {
  for (Sentence &s : sentences) TagTokens(&s.tokens);
  return sentences;
}

HttpTagger::HttpTagger(std::string base_url)
    : HttpTagger(std::move(base_url), Options()) {}

HttpTagger::HttpTagger(std::string base_url, Options options)
    : base_url_(std::move(base_url)), options_(options) {}

std::vector<Sentence> HttpTagger::Tag(std::vector<Sentence> sentences) const {
  if (sentences.empty()) return sentences;
  nlohmann::json request;
  request["sentences"] = nlohmann::json::array();
  for (const Sentence &s : sentences) request["sentences"].push_back(s.text);

  nlohmann::json response = internal::PostJson(
      base_url_, "/tag", request,
      {options_.timeout_ms, options_.max_attempts, options_.backoff_ms});

  auto fail = [](const std::string &what) -> ProtocolError {
    return ProtocolError("tagger response: " + what);
  };
  if (!response.is_object() || !response.contains("sentences") ||
      !response["sentences"].is_array()) {
    throw fail("missing \"sentences\" array");
  }
  const auto &out = response["sentences"];
  if (out.size() != sentences.size()) {
    throw fail("expected " + std::to_string(sentences.size()) +
               " sentences, got " + std::to_string(out.size()));
  }
  for (size_t i = 0; i < sentences.size(); ++i) {
    Sentence &s = sentences[i];
    const auto &toks = out[i].value("tokens", nlohmann::json());
    if (!toks.is_array()) throw fail("sentence " + std::to_string(i) + " has no tokens");
    std::vector<Token> tokens;
    int prev_end = 0;
    for (const auto &t : toks) {
      if (!t.is_object() || !t.contains("start") || !t.contains("end") ||
          !t.contains("pos") || !t["start"].is_number_integer() ||
          !t["end"].is_number_integer() || !t["pos"].is_string()) {
        throw fail("malformed token in sentence " + std::to_string(i));
      }
      Token tok;
      tok.start = t["start"].get<int>();
      tok.end = t["end"].get<int>();
      auto pos = ParsePos(t["pos"].get<std::string>());
      if (!pos) throw fail("unknown pos " + t["pos"].get<std::string>());
      tok.pos = *pos;
      if (tok.start < prev_end || tok.start >= tok.end ||
          tok.end > static_cast<int>(s.text.size())) {
        throw fail("bad token offsets in sentence " + std::to_string(i));
      }
      tok.text = s.text.substr(tok.start, tok.end - tok.start);
      prev_end = tok.end;
      tokens.push_back(std::move(tok));
    }
    s.tokens = std::move(tokens);
  }
  return sentences;
}

Sentence pos_tag(Sentence sentence, const TaggerBackend &tagger) {
  std::vector<Sentence> one;
  one.push_back(std::move(sentence));
  return std::move(tagger.Tag(std::move(one)).front());
}

std::vector<Sentence> Preprocess(std::string_view text,
                                 const TaggerBackend &tagger) {
  return tagger.Tag(segment_and_tokenize(text));
}

}  // namespace zsie
