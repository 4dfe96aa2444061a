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

#ifndef ZSIE_METRICS_H_
#define ZSIE_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "zsie/inference.h"
#include "zsie/schema.h"

namespace zsie {

enum class Verdict { kCorrect, kIncorrect };

std::string_view VerdictName(Verdict v);
std::optional<Verdict> ParseVerdict(std::string_view name);

struct UserLabel {
  std::string extraction_id;
  Verdict verdict = Verdict::kCorrect;
  int64_t timestamp_ms = 0;

  bool operator==(const UserLabel &) const = default;
};

enum class MetricsScope { kTask, kType, kTemplate };

std::string_view ScopeName(MetricsScope scope);
std::optional<MetricsScope> ParseScope(std::string_view name);

// Tallies over positive extractions in one scope. `total` counts the
// extractions whose winning label (and template) fall in the scope, which
// for template rows is the template's yield.
struct MetricsRow {
  MetricsScope scope = MetricsScope::kTask;
  std::string name;  // "NER", "NER/PERSON", "NER/PERSON/t0"
  std::string task;
  std::string type;
  std::string template_id;
  std::string template_text;
  long total = 0;
  long correct = 0;
  long incorrect = 0;
  std::optional<double> accuracy;  // correct / (correct + incorrect)
  bool stale = false;  // type or template no longer in the schema

  bool operator==(const MetricsRow &) const = default;
};

enum class SortKey { kName, kTotal, kCorrect, kIncorrect, kAccuracy };

std::optional<SortKey> ParseSortKey(std::string_view name);

struct MetricsQuery {
  std::optional<MetricsScope> scope;  // all scopes when empty
  std::optional<Task> task;
  SortKey sort = SortKey::kName;
  // Numeric keys sort descending unless set; names ascending. Ties are
  // broken by name; rows without accuracy sort last.
  bool ascending = false;
};

nlohmann::json MetricsRowToJson(const MetricsRow &row);

// Extractions shown to the analyst and their correctness labels. Labels are
// appended to a JSON-lines log (one {"extraction", "verdict", "timestamp"}
// record per label) and replayed on construction. Thread-safe: one writer
// at a time, readers see a consistent snapshot.
class LabelStore {
 public:
  // In-memory only.
  LabelStore();

  // Persistent; replays `log_path` if it exists. Throws ParseError on a
  // corrupt record other than a truncated final line.
  explicit LabelStore(std::string log_path);

  LabelStore(const LabelStore &) = delete;
  LabelStore &operator=(const LabelStore &) = delete;

  // Makes positive extractions labelable. Negative ones are ignored.
  void Register(const Extraction &extraction);
  void Register(const std::vector<Extraction> &extractions);

  bool Contains(const std::string &extraction_id) const;

  // Stores (or overwrites) the verdict and appends it to the log. Throws
  // NotFoundError for unknown ids. `timestamp_ms` defaults to now.
  void record_label(const std::string &extraction_id, Verdict verdict,
                    std::optional<int64_t> timestamp_ms = std::nullopt);

  std::optional<UserLabel> LabelOf(const std::string &extraction_id) const;

  std::vector<MetricsRow> metrics(const MetricsQuery &query = {}) const;

  // JSON lines, one record per extraction sorted by id: {"extraction",
  // "verdict", "timestamp"}, verdict null when unlabeled.
  std::string export_devset() const;

  // Adds the records of `source`. Returns warnings, e.g. for types missing
  // from the current schema (such rows are kept and flagged stale). Throws
  // ParseError / ValidationError without modifying the store.
  std::vector<std::string> import_devset(std::string_view source);

  // Schema used to flag stale types and templates.
  void SetSchema(const Schema &schema);

  // Rewrites the log with one record per labeled extraction.
  void Compact();

  size_t size() const;
  size_t label_count() const;
  size_t log_records() const;

 private:
  struct Entry {
    Extraction extraction;
    std::optional<UserLabel> label;
  };

  bool IsStale(const Extraction &e) const;
  std::vector<std::string> StaleWarnings(const Extraction &e) const;
  void AppendLocked(const Entry &entry);
  void CompactLocked();

  mutable std::shared_mutex mu_;
  std::string log_path_;
  std::map<std::string, Entry> entries_;
  std::optional<Schema> schema_;
  size_t log_records_ = 0;
};

// Tests whether `extraction` still refers to something in `schema`.
bool TemplateInSchema(const Extraction &extraction, const Schema &schema);
bool TypeInSchema(const Extraction &extraction, const Schema &schema);

}  // namespace zsie

#endif  // ZSIE_METRICS_H_
