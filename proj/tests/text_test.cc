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

#include <gtest/gtest.h>

#include <random>

#include "json.hpp"
#include "loopback.h"
#include "zsie/errors.h"

namespace zsie {
namespace {

constexpr char kObituary[] =
    "John Smith, an executive at XYZ Corp., died in Florida on Sunday";

std::vector<std::string> Words(const Sentence &s) {
  std::vector<std::string> out;
  for (const Token &t : s.tokens) out.push_back(t.text);
  return out;
}

std::vector<std::string> Tags(const Sentence &s) {
  std::vector<std::string> out;
  for (const Token &t : s.tokens) out.emplace_back(PosName(t.pos));
  return out;
}

TEST(TokenizeTest, SimpleSentence) {
  auto s = segment_and_tokenize("John Smith died.");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(Words(s[0]), (std::vector<std::string>{"John", "Smith", "died", "."}));
}

TEST(TokenizeTest, ObituarySentence) {
  auto s = segment_and_tokenize(kObituary);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(Words(s[0]),
            (std::vector<std::string>{"John", "Smith", ",", "an", "executive",
                                      "at", "XYZ", "Corp.", ",", "died", "in",
                                      "Florida", "on", "Sunday"}));
}

TEST(TokenizeTest, EmptyAndWhitespace) {
  EXPECT_TRUE(segment_and_tokenize("").empty());
  EXPECT_TRUE(segment_and_tokenize("  \n\t ").empty());
}

TEST(TokenizeTest, Segmentation) {
  std::string text = "Mr. Lee left. He came back!  Then he slept? no.";
  auto s = segment_and_tokenize(text);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].text, "Mr. Lee left.");
  EXPECT_EQ(s[1].text, "He came back!");
  EXPECT_EQ(s[2].text, "Then he slept? no.");
  EXPECT_EQ(s[0].doc_begin, 0);
  EXPECT_EQ(s[2].doc_end, static_cast<int>(text.size()));
  for (size_t i = 1; i < s.size(); ++i) EXPECT_EQ(s[i].doc_begin, s[i - 1].doc_end);
  for (const Sentence &x : s) {
    EXPECT_EQ(text.substr(x.text_offset, x.text.size()), x.text);
  }
}

TEST(TokenizeTest, QuotedSentenceEnd) {
  auto s = segment_and_tokenize("He said \"stop.\" Then left.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].text, "Then left.");
}

// Offsets are byte offsets: tokens reproduce the text and never overlap.
TEST(TokenizeTest, OffsetInvariantsOnRandomText) {
  std::mt19937 rng(7);
  const std::string alphabet = "aZ .,!?\"'()-x\xc3\xa9 \nQ";
  for (int round = 0; round < 300; ++round) {
    std::string text;
    int n = rng() % 60;
    for (int i = 0; i < n; ++i) text += alphabet[rng() % alphabet.size()];
    int covered = 0;
    for (const Sentence &s : segment_and_tokenize(text)) {
      EXPECT_EQ(s.doc_begin, covered);
      covered = s.doc_end;
      int prev = 0;
      for (const Token &t : s.tokens) {
        ASSERT_LE(prev, t.start);
        ASSERT_LT(t.start, t.end);
        ASSERT_LE(t.end, static_cast<int>(s.text.size()));
        EXPECT_EQ(s.text.substr(t.start, t.end - t.start), t.text);
        prev = t.end;
      }
    }
    if (text.find_first_not_of(" \n") != std::string::npos) {
      EXPECT_EQ(covered, static_cast<int>(text.size())) << text;
    }
  }
}

TEST(RuleTaggerTest, SimpleSentence) {
  RuleTagger tagger;
  auto s = Preprocess("John Smith died.", tagger);
  EXPECT_EQ(Tags(s[0]), (std::vector<std::string>{"PROPN", "PROPN", "VERB", "PUNCT"}));
}

TEST(RuleTaggerTest, ObituaryProperNounsAndVerb) {
  RuleTagger tagger;
  auto s = Preprocess(kObituary, tagger);
  std::vector<std::string> runs;
  std::string run;
  std::vector<std::string> verbs;
  for (const Token &t : s[0].tokens) {
    if (t.pos == Pos::kPropn) {
      run += (run.empty() ? "" : " ") + t.text;
    } else if (!run.empty()) {
      runs.push_back(run);
      run.clear();
    }
    if (t.pos == Pos::kVerb) verbs.push_back(t.text);
  }
  if (!run.empty()) runs.push_back(run);
  EXPECT_EQ(runs, (std::vector<std::string>{"John Smith", "XYZ Corp.", "Florida", "Sunday"}));
  EXPECT_EQ(verbs, std::vector<std::string>{"died"});
}

TEST(RuleTaggerTest, SentenceInitialCommonWord) {
  RuleTagger tagger;
  auto s = Preprocess("Yesterday the Board met in Paris.", tagger);
  EXPECT_EQ(Tags(s[0]), (std::vector<std::string>{"ADV", "DET", "PROPN", "VERB",
                                                  "ADP", "PROPN", "PUNCT"}));
  s = Preprocess("Dogs bark at Max. Monday came.", tagger);
  EXPECT_EQ(s[0].tokens[0].pos, Pos::kNoun);
  EXPECT_EQ(s[0].tokens[3].pos, Pos::kPropn);
  EXPECT_EQ(s[1].tokens[0].pos, Pos::kPropn);
}

TEST(PosTest, NamesRoundTrip) {
  for (int i = 0; i < kNumPosTags; ++i) {
    Pos p = static_cast<Pos>(i);
    EXPECT_EQ(ParsePos(PosName(p)), p);
  }
  EXPECT_FALSE(ParsePos("FOO"));
}

TEST(HttpTaggerTest, UsesTagProtocol) {
  Loopback lb;
  nlohmann::json seen;
  lb.server().Post("/tag", [&](const httplib::Request &req, httplib::Response &res) {
    seen = nlohmann::json::parse(req.body);
    nlohmann::json out;
    out["sentences"] = nlohmann::json::array();
    for (const auto &s : seen["sentences"]) {
      std::string text = s.get<std::string>();
      nlohmann::json toks = nlohmann::json::array();
      size_t start = 0;
      while (start < text.size()) {
        size_t end = text.find(' ', start);
        if (end == std::string::npos) end = text.size();
        toks.push_back({{"text", text.substr(start, end - start)},
                        {"start", start}, {"end", end}, {"pos", "NOUN"}});
        start = end + 1;
      }
      out["sentences"].push_back({{"tokens", toks}});
    }
    res.set_content(out.dump(), "application/json");
  });
  lb.Start();
  HttpTagger tagger(lb.url());
  auto s = Preprocess("Dogs bark loudly. Cats sleep.", tagger);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(seen["sentences"], (nlohmann::json{"Dogs bark loudly.", "Cats sleep."}));
  EXPECT_EQ(Words(s[0]), (std::vector<std::string>{"Dogs", "bark", "loudly."}));
  EXPECT_EQ(s[1].tokens[1].pos, Pos::kNoun);
}

TEST(HttpTaggerTest, RejectsBadPayloads) {
  Loopback lb;
  std::string reply;
  lb.server().Post("/tag", [&](const httplib::Request &, httplib::Response &res) {
    res.set_content(reply, "application/json");
  });
  lb.Start();
  HttpTagger tagger(lb.url(), {2000, 1, 1});
  std::vector<Sentence> in = {tokenize_sentence("ab cd")};
  reply = R"({"sentences": [{"tokens": [{"start": 0, "end": 2, "pos": "XX"}]}]})";
  EXPECT_THROW(tagger.Tag(in), ProtocolError);
  reply = R"({"sentences": [{"tokens": [{"start": 0, "end": 9, "pos": "NOUN"}]}]})";
  EXPECT_THROW(tagger.Tag(in), ProtocolError);
  reply = R"({"sentences": []})";
  EXPECT_THROW(tagger.Tag(in), ProtocolError);
  reply = "not json";
  EXPECT_THROW(tagger.Tag(in), ProtocolError);
}

}  // namespace
}  // namespace zsie
