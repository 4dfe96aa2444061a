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

#ifndef ZSIE_ENTAILMENT_H_
#define ZSIE_ENTAILMENT_H_

#include <atomic>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace zsie {

// Three-way entailment distribution. Valid scores lie on the probability
// simplex within 1e-6.
struct EntailmentScore {
  double entail = 0.0;
  double neutral = 1.0;
  double contradict = 0.0;

  bool valid() const;

  bool operator==(const EntailmentScore &) const = default;
};

inline constexpr double kSimplexTolerance = 1e-6;

// Scores (premise, hypothesis) pairs. Implementations must be safe for
// concurrent calls.
class EntailmentBackend {
 public:
  virtual ~EntailmentBackend() = default;

  // Result i scores hypotheses[i]. Throws std::invalid_argument on an empty
  // batch.
  virtual std::vector<EntailmentScore> entail_batch(
      const std::string &premise,
      const std::vector<std::string> &hypotheses) const = 0;
};

// Fixed scores keyed by exact (premise, hypothesis) strings.
class OracleTable {
 public:
  OracleTable() = default;

  // Throws std::invalid_argument if `score` is off the simplex.
  void Set(const std::string &premise, const std::string &hypothesis,
           EntailmentScore score);

  // The stored score, or default_score() for unknown pairs.
  const EntailmentScore &Lookup(const std::string &premise,
                                const std::string &hypothesis) const;

  bool Contains(const std::string &premise,
                const std::string &hypothesis) const;

  const EntailmentScore &default_score() const { return default_; }
  size_t size() const { return entries_.size(); }

  // Entries in insertion order, for serialization.
  struct Entry {
    std::string premise;
    std::string hypothesis;
    EntailmentScore score;
  };
  const std::vector<Entry> &entries() const { return entries_; }

 private:
  static std::string Key(const std::string &premise,
                         const std::string &hypothesis);

  std::vector<Entry> entries_;
  std::unordered_map<std::string, size_t> index_;
  EntailmentScore default_{0.0, 1.0, 0.0};
};

// Parses the oracle file: a JSON list of {"premise", "hypothesis",
// "entail", "neutral", "contradict"} objects. Later duplicates overwrite
// earlier ones. Throws ParseError or ValidationError (off-simplex triple).
OracleTable load_oracle(std::string_view source);

std::string save_oracle(const OracleTable &table);

// Deterministic in-process backend answering from an OracleTable.
class MockBackend : public EntailmentBackend {
 public:
  explicit MockBackend(OracleTable table) : table_(std::move(table)) {}

  std::vector<EntailmentScore> entail_batch(
      const std::string &premise,
      const std::vector<std::string> &hypotheses) const override;

  const OracleTable &table() const { return table_; }

 private:
  OracleTable table_;
};

// Client for the remote NLI service: POST /entail with
// {"premise", "hypotheses"} and {"scores": [{entail, neutral, contradict}]}
// back. A batch of n hypotheses is sent as ceil(n / max_batch) requests,
// up to max_in_flight of them concurrently; retryable failures are retried
// with exponential backoff.
class HttpEntailmentBackend : public EntailmentBackend {
 public:
  struct Options {
    int max_batch = 32;
    int max_in_flight = 4;
    int max_attempts = 3;
    int backoff_ms = 100;
    int timeout_ms = 60000;
  };

  explicit HttpEntailmentBackend(std::string base_url);
  HttpEntailmentBackend(std::string base_url, Options options);

  std::vector<EntailmentScore> entail_batch(
      const std::string &premise,
      const std::vector<std::string> &hypotheses) const override;

  // Number of HTTP requests attempted so far (including retries).
  long request_count() const { return requests_.load(); }

 private:
  std::vector<EntailmentScore> SendChunk(
      const std::string &premise, const std::vector<std::string> &hypotheses,
      size_t begin, size_t end) const;

  std::string base_url_;
  Options options_;
  mutable std::atomic<long> requests_{0};
};

// Builds a backend from a spec string: "mock:<oracle-file>", "mock:" (empty
// table), or "http:<url>". Throws ConfigurationError on unknown schemes.
std::unique_ptr<EntailmentBackend> MakeBackend(
    std::string_view spec, const HttpEntailmentBackend::Options &options = {});

}  // namespace zsie

#endif  // ZSIE_ENTAILMENT_H_
