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

#include "zsie/entailment.h"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "http_util.h"
#include "json.hpp"
#include "zsie/errors.h"
#include "zsie/json_util.h"

namespace zsie {

using nlohmann::json;

namespace {

std::string Describe(const EntailmentScore &s) {
  return "(" + std::to_string(s.entail) + ", " + std::to_string(s.neutral) +
         ", " + std::to_string(s.contradict) + ")";
}

}  // namespace

bool EntailmentScore::valid() const {
  for (double p : {entail, neutral, contradict}) {
    if (!(p >= 0.0 && p <= 1.0)) return false;
  }
  return std::abs(entail + neutral + contradict - 1.0) <= kSimplexTolerance;
}

std::string OracleTable::Key(const std::string &premise,
                             const std::string &hypothesis) {
  std::string key;
  key.reserve(premise.size() + hypothesis.size() + 1);
  key += premise;
  key += '\x1f';
  key += hypothesis;
  return key;
}

void OracleTable::Set(const std::string &premise, const std::string &hypothesis,
                      EntailmentScore score) {
  if (!score.valid()) {
    throw std::invalid_argument("score " + Describe(score) +
                                " is not a probability distribution");
  }
  std::string key = Key(premise, hypothesis);
  auto it = index_.find(key);
  if (it != index_.end()) {
    entries_[it->second].score = score;
    return;
  }
  index_.emplace(std::move(key), entries_.size());
  entries_.push_back({premise, hypothesis, score});
}

const EntailmentScore &OracleTable::Lookup(const std::string &premise,
                                           const std::string &hypothesis) const {
  auto it = index_.find(Key(premise, hypothesis));
  return it == index_.end() ? default_ : entries_[it->second].score;
}

bool OracleTable::Contains(const std::string &premise,
                           const std::string &hypothesis) const {
  return index_.count(Key(premise, hypothesis)) > 0;
}

OracleTable load_oracle(std::string_view source) {
  json doc = ParseJson(source);
  if (!doc.is_array()) throw ParseError("oracle: expected a JSON list");
  OracleTable table;
  for (size_t i = 0; i < doc.size(); ++i) {
    std::string path = "oracle[" + std::to_string(i) + "]";
    const json &e = RequireObject(doc[i], path);
    RejectUnknownKeys(
        e, {"premise", "hypothesis", "entail", "neutral", "contradict"}, path);
    EntailmentScore score{RequireNumber(e, "entail", path),
                          RequireNumber(e, "neutral", path),
                          RequireNumber(e, "contradict", path)};
    if (!score.valid()) {
      throw ValidationError(path + ": score " + Describe(score) +
                            " is not a probability distribution");
    }
    table.Set(RequireString(e, "premise", path),
              RequireString(e, "hypothesis", path), score);
  }
  return table;
}

std::string save_oracle(const OracleTable &table) {
  json doc = json::array();
  for (const auto &e : table.entries()) {
    doc.push_back({{"premise", e.premise},
                   {"hypothesis", e.hypothesis},
                   {"entail", e.score.entail},
                   {"neutral", e.score.neutral},
                   {"contradict", e.score.contradict}});
  }
  return doc.dump(2) + "\n";
}

std::vector<EntailmentScore> MockBackend::entail_batch(
    const std::string &premise,
    const std::vector<std::string> &hypotheses) const {
  if (hypotheses.empty()) throw std::invalid_argument("empty hypothesis batch");
  std::vector<EntailmentScore> out;
  out.reserve(hypotheses.size());
  for (const std::string &h : hypotheses) {
    out.push_back(table_.Lookup(premise, h));
  }
  return out;
}

HttpEntailmentBackend::HttpEntailmentBackend(std::string base_url)
    : HttpEntailmentBackend(std::move(base_url), Options()) {}

HttpEntailmentBackend::HttpEntailmentBackend(std::string base_url,
                                             Options options)
    : base_url_(std::move(base_url)), options_(options) {
  if (options_.max_batch < 1) options_.max_batch = 1;
  if (options_.max_in_flight < 1) options_.max_in_flight = 1;
}

std::vector<EntailmentScore> HttpEntailmentBackend::SendChunk(
    const std::string &premise, const std::vector<std::string> &hypotheses,
    size_t begin, size_t end) const {
  json request;
  request["premise"] = premise;
  request["hypotheses"] = json::array();
  for (size_t i = begin; i < end; ++i) {
    request["hypotheses"].push_back(hypotheses[i]);
  }
  json response = internal::PostJson(
      base_url_, "/entail", request,
      {options_.timeout_ms, options_.max_attempts, options_.backoff_ms},
      &requests_);

  if (!response.is_object() || !response.contains("scores") ||
      !response["scores"].is_array()) {
    throw ProtocolError("entail response: missing \"scores\" array");
  }
  const json &scores = response["scores"];
  if (scores.size() != end - begin) {
    throw ProtocolError("entail response: expected " +
                        std::to_string(end - begin) + " scores, got " +
                        std::to_string(scores.size()));
  }
  std::vector<EntailmentScore> out;
  for (const json &s : scores) {
    if (!s.is_object() || !s.contains("entail") || !s.contains("neutral") ||
        !s.contains("contradict") || !s["entail"].is_number() ||
        !s["neutral"].is_number() || !s["contradict"].is_number()) {
      throw ProtocolError("entail response: malformed score " + s.dump());
    }
    EntailmentScore score{s["entail"].get<double>(), s["neutral"].get<double>(),
                          s["contradict"].get<double>()};
    // Remote models round their softmax; accept a looser simplex but keep
    // the values in range.
    if (!(score.entail >= 0 && score.entail <= 1 && score.neutral >= 0 &&
          score.neutral <= 1 && score.contradict >= 0 &&
          score.contradict <= 1) ||
        std::abs(score.entail + score.neutral + score.contradict - 1.0) >
            1e-3) {
      throw ProtocolError("entail response: score off the simplex " + s.dump());
    }
    out.push_back(score);
  }
  return out;
}

std::vector<EntailmentScore> HttpEntailmentBackend::entail_batch(
    const std::string &premise,
    const std::vector<std::string> &hypotheses) const {
  if (hypotheses.empty()) throw std::invalid_argument("empty hypothesis batch");
  const size_t batch = static_cast<size_t>(options_.max_batch);
  const size_t chunks = (hypotheses.size() + batch - 1) / batch;
  if (chunks == 1) return SendChunk(premise, hypotheses, 0, hypotheses.size());

  std::vector<std::vector<EntailmentScore>> results(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      try {
        size_t begin = c * batch;
        results[c] = SendChunk(premise, hypotheses, begin,
                               std::min(begin + batch, hypotheses.size()));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  size_t workers =
      std::min(chunks, static_cast<size_t>(options_.max_in_flight));
  std::vector<std::thread> threads;
  for (size_t i = 1; i < workers; ++i) threads.emplace_back(worker);
  worker();
  for (std::thread &t : threads) t.join();

  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<EntailmentScore> out;
  out.reserve(hypotheses.size());
  for (auto &r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::unique_ptr<EntailmentBackend> MakeBackend(
    std::string_view spec, const HttpEntailmentBackend::Options &options) {
  if (spec.rfind("mock:", 0) == 0) {
    std::string path(spec.substr(5));
    OracleTable table;
    if (!path.empty()) table = load_oracle(ReadFile(path));
    return std::make_unique<MockBackend>(std::move(table));
  }
  if (spec == "mock") return std::make_unique<MockBackend>(OracleTable());
  if (spec.rfind("http:", 0) == 0 || spec.rfind("https:", 0) == 0) {
    // Accept both "http:<host:port>" and "http://host:port".
    std::string url(spec);
    if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0) {
      url = "http://" + url.substr(5);
    }
    return std::make_unique<HttpEntailmentBackend>(url, options);
  }
  throw ConfigurationError("unknown backend \"" + std::string(spec) +
                           "\" (expected mock:<oracle-file> or http:<url>)");
}

}  // namespace zsie
