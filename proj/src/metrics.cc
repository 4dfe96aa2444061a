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

#include "zsie/metrics.h"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "zsie/errors.h"
#include "zsie/json_util.h"
#include "zsie/serialize.h"

namespace zsie {

using nlohmann::json;

std::string_view VerdictName(Verdict v) {
  return v == Verdict::kCorrect ? "correct" : "incorrect";
}

std::optional<Verdict> ParseVerdict(std::string_view name) {
  if (name == "correct" || name == "+") return Verdict::kCorrect;
  if (name == "incorrect" || name == "-") return Verdict::kIncorrect;
  return std::nullopt;
}

std::string_view ScopeName(MetricsScope scope) {
  switch (scope) {
    case MetricsScope::kTask: return "task";
    case MetricsScope::kType: return "type";
    case MetricsScope::kTemplate: return "template";
  }
  return "?";
}

std::optional<MetricsScope> ParseScope(std::string_view name) {
  for (MetricsScope s :
       {MetricsScope::kTask, MetricsScope::kType, MetricsScope::kTemplate}) {
    if (ScopeName(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<SortKey> ParseSortKey(std::string_view name) {
  if (name == "name") return SortKey::kName;
  if (name == "total" || name == "yield") return SortKey::kTotal;
  if (name == "correct") return SortKey::kCorrect;
  if (name == "incorrect") return SortKey::kIncorrect;
  if (name == "accuracy") return SortKey::kAccuracy;
  return std::nullopt;
}

json MetricsRowToJson(const MetricsRow &row) {
  json j;
  j["scope"] = std::string(ScopeName(row.scope));
  j["name"] = row.name;
  j["task"] = row.task;
  if (row.scope != MetricsScope::kTask) j["type"] = row.type;
  if (row.scope == MetricsScope::kTemplate) {
    j["template"] = row.template_id;
    j["template_text"] = row.template_text;
  }
  j["total"] = row.total;
  j["correct"] = row.correct;
  j["incorrect"] = row.incorrect;
  j["accuracy"] = row.accuracy ? json(*row.accuracy) : json();
  j["stale"] = row.stale;
  return j;
}

bool TypeInSchema(const Extraction &e, const Schema &schema) {
  switch (e.task) {
    case Task::kNer: return schema.FindEntity(e.label) != nullptr;
    case Task::kRe: return schema.FindRelation(e.label) != nullptr;
    case Task::kEe: return schema.FindEvent(e.label) != nullptr;
    case Task::kEae:
      return schema.FindRole(e.candidate.left_type, e.label) != nullptr;
  }
  return false;
}

bool TemplateInSchema(const Extraction &e, const Schema &schema) {
  const std::vector<Template> *templates = nullptr;
  switch (e.task) {
    case Task::kNer:
      if (auto *d = schema.FindEntity(e.label)) templates = &d->templates;
      break;
    case Task::kRe:
      if (auto *d = schema.FindRelation(e.label)) templates = &d->templates;
      break;
    case Task::kEe:
      if (auto *d = schema.FindEvent(e.label)) templates = &d->templates;
      break;
    case Task::kEae:
      if (auto *d = schema.FindRole(e.candidate.left_type, e.label)) {
        templates = &d->templates;
      }
      break;
  }
  if (templates == nullptr) return false;
  return std::any_of(templates->begin(), templates->end(),
                     [&](const Template &t) { return t.id == e.template_id; });
}

namespace {

int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

json RecordToJson(const Extraction &e, const std::optional<UserLabel> &label) {
  json j;
  j["extraction"] = ExtractionToJson(e);
  j["extraction"].erase("ranked");
  j["verdict"] = label ? json(std::string(VerdictName(label->verdict))) : json();
  j["timestamp"] = label ? json(label->timestamp_ms) : json();
  return j;
}

struct Record {
  Extraction extraction;
  std::optional<UserLabel> label;
};

Record RecordFromJson(const json &j, const std::string &path) {
  RequireObject(j, path);
  RejectUnknownKeys(j, {"extraction", "verdict", "timestamp"}, path);
  if (!j.contains("extraction")) {
    throw ParseError(path + ": missing key \"extraction\"");
  }
  Record r;
  r.extraction = ExtractionFromJson(j["extraction"], path + ".extraction");
  if (!r.extraction.positive()) {
    throw ValidationError(path + ": dev-set records must be positive extractions");
  }
  if (j.contains("verdict") && !j["verdict"].is_null()) {
    if (!j["verdict"].is_string()) {
      throw ParseError(path + ".verdict: expected string");
    }
    auto v = ParseVerdict(j["verdict"].get<std::string>());
    if (!v) throw ParseError(path + ".verdict: expected correct|incorrect");
    UserLabel label{r.extraction.id, *v, 0};
    if (j.contains("timestamp") && j["timestamp"].is_number_integer()) {
      label.timestamp_ms = j["timestamp"].get<int64_t>();
    }
    r.label = label;
  }
  return r;
}

// Parses JSON lines; blank lines are skipped.
std::vector<Record> ParseRecords(std::string_view source,
                                 bool tolerate_truncated_tail) {
  std::vector<Record> out;
  std::istringstream in{std::string(source)};
  std::string line;
  int number = 0;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  for (size_t i = 0; i < lines.size(); ++i) {
    number = static_cast<int>(i) + 1;
    const std::string &l = lines[i];
    if (l.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(l);
    } catch (const json::parse_error &e) {
      bool last = i + 1 == lines.size();
      if (tolerate_truncated_tail && last) break;
      throw ParseError(std::string("malformed record: ") + e.what(), number);
    }
    try {
      out.push_back(RecordFromJson(j, "record"));
    } catch (const ParseError &e) {
      throw ParseError(e.what(), number);
    } catch (const ValidationError &e) {
      throw ValidationError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

bool RowLess(const MetricsRow &a, const MetricsRow &b, const MetricsQuery &q) {
  auto by_name = [&] { return a.name < b.name; };
  auto numeric = [&](double x, double y) {
    if (x != y) return q.ascending ? x < y : x > y;
    return by_name();
  };
  switch (q.sort) {
    case SortKey::kName:
      return by_name();
    case SortKey::kTotal:
      return numeric(a.total, b.total);
    case SortKey::kCorrect:
      return numeric(a.correct, b.correct);
    case SortKey::kIncorrect:
      return numeric(a.incorrect, b.incorrect);
    case SortKey::kAccuracy:
      if (a.accuracy.has_value() != b.accuracy.has_value()) {
        return a.accuracy.has_value();
      }
      if (!a.accuracy) return by_name();
      return numeric(*a.accuracy, *b.accuracy);
  }
  return by_name();
}

}  // namespace

LabelStore::LabelStore() = default;

LabelStore::LabelStore(std::string log_path) : log_path_(std::move(log_path)) {
  if (!std::filesystem::exists(log_path_)) return;
  for (Record &r : ParseRecords(ReadFile(log_path_), true)) {
    ++log_records_;
    Entry &entry = entries_[r.extraction.id];
    entry.extraction = std::move(r.extraction);
    if (r.label) entry.label = r.label;
  }
}

void LabelStore::Register(const Extraction &extraction) {
  if (!extraction.positive() || extraction.id.empty()) return;
  std::unique_lock lock(mu_);
  Entry &entry = entries_[extraction.id];
  entry.extraction = extraction;
}

void LabelStore::Register(const std::vector<Extraction> &extractions) {
  for (const Extraction &e : extractions) Register(e);
}

bool LabelStore::Contains(const std::string &id) const {
  std::shared_lock lock(mu_);
  return entries_.count(id) > 0;
}

void LabelStore::record_label(const std::string &id, Verdict verdict,
                              std::optional<int64_t> timestamp_ms) {
  std::unique_lock lock(mu_);
  auto it = entries_.find(id);
  if (it == entries_.end()) throw NotFoundError("unknown extraction " + id);
  it->second.label = UserLabel{id, verdict, timestamp_ms.value_or(NowMs())};
  AppendLocked(it->second);
  size_t labels = 0;
  for (const auto &[_, e] : entries_) labels += e.label.has_value();
  if (log_records_ > 64 && log_records_ > 2 * labels) CompactLocked();
}

std::optional<UserLabel> LabelStore::LabelOf(const std::string &id) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  return it->second.label;
}

void LabelStore::AppendLocked(const Entry &entry) {
  ++log_records_;
  if (log_path_.empty()) return;
  std::string line = RecordToJson(entry.extraction, entry.label).dump() + "\n";
  FILE *f = std::fopen(log_path_.c_str(), "ab");
  if (f == nullptr) throw Error("cannot append to " + log_path_);
  bool ok = std::fwrite(line.data(), 1, line.size(), f) == line.size();
  ok = std::fflush(f) == 0 && ok;
  ::fsync(fileno(f));
  std::fclose(f);
  if (!ok) throw Error("short write to " + log_path_);
}

void LabelStore::CompactLocked() {
  size_t labels = 0;
  std::string content;
  for (const auto &[id, e] : entries_) {
    if (!e.label) continue;
    content += RecordToJson(e.extraction, e.label).dump() + "\n";
    ++labels;
  }
  log_records_ = labels;
  if (log_path_.empty()) return;
  std::string tmp = log_path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out.flush()) throw Error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, log_path_);
}

void LabelStore::Compact() {
  std::unique_lock lock(mu_);
  CompactLocked();
}

bool LabelStore::IsStale(const Extraction &e) const {
  return schema_ && !TypeInSchema(e, *schema_);
}

std::vector<std::string> LabelStore::StaleWarnings(const Extraction &e) const {
  std::vector<std::string> out;
  if (!schema_) return out;
  if (!TypeInSchema(e, *schema_)) {
    out.push_back(e.id + ": type " + e.label + " is not in the schema");
  } else if (!TemplateInSchema(e, *schema_)) {
    out.push_back(e.id + ": template " + e.template_id + " of " + e.label +
                  " is not in the schema");
  }
  return out;
}

void LabelStore::SetSchema(const Schema &schema) {
  std::unique_lock lock(mu_);
  schema_ = schema;
}

std::vector<MetricsRow> LabelStore::metrics(const MetricsQuery &query) const {
  std::shared_lock lock(mu_);
  std::map<std::string, MetricsRow> rows;
  auto tally = [](MetricsRow &row, const Entry &entry) {
    ++row.total;
    if (entry.label) {
      (entry.label->verdict == Verdict::kCorrect ? row.correct
                                                 : row.incorrect)++;
    }
  };
  for (const auto &[id, entry] : entries_) {
    const Extraction &e = entry.extraction;
    if (query.task && *query.task != e.task) continue;
    std::string task(TaskName(e.task));
    // EAE roles are only unique per event.
    std::string type = e.task == Task::kEae
                           ? e.candidate.left_type + ":" + e.label
                           : e.label;

    MetricsRow &t = rows[task];
    t.scope = MetricsScope::kTask;
    t.name = task;
    t.task = task;
    tally(t, entry);

    MetricsRow &ty = rows[task + "/" + type];
    ty.scope = MetricsScope::kType;
    ty.name = task + "/" + type;
    ty.task = task;
    ty.type = type;
    ty.stale = IsStale(e);
    tally(ty, entry);

    MetricsRow &tm = rows[task + "/" + type + "/" + e.template_id];
    tm.scope = MetricsScope::kTemplate;
    tm.name = task + "/" + type + "/" + e.template_id;
    tm.task = task;
    tm.type = type;
    tm.template_id = e.template_id;
    tm.template_text = e.template_text;
    tm.stale = schema_ && !TemplateInSchema(e, *schema_);
    tally(tm, entry);
  }

  std::vector<MetricsRow> out;
  for (auto &[name, row] : rows) {
    if (query.scope && *query.scope != row.scope) continue;
    long labeled = row.correct + row.incorrect;
    if (labeled > 0) {
      row.accuracy = static_cast<double>(row.correct) / labeled;
    }
    out.push_back(std::move(row));
  }
  std::stable_sort(out.begin(), out.end(),
                   [&](const MetricsRow &a, const MetricsRow &b) {
                     return RowLess(a, b, query);
                   });
  return out;
}

std::string LabelStore::export_devset() const {
  std::shared_lock lock(mu_);
  std::string out;
  for (const auto &[id, e] : entries_) {
    out += RecordToJson(e.extraction, e.label).dump() + "\n";
  }
  return out;
}

std::vector<std::string> LabelStore::import_devset(std::string_view source) {
  std::vector<Record> records = ParseRecords(source, false);
  std::unique_lock lock(mu_);
  std::vector<std::string> warnings;
  for (Record &r : records) {
    for (std::string &w : StaleWarnings(r.extraction)) {
      warnings.push_back(std::move(w));
    }
    Entry &entry = entries_[r.extraction.id];
    entry.extraction = std::move(r.extraction);
    if (r.label) {
      entry.label = r.label;
      AppendLocked(entry);
    }
  }
  return warnings;
}

size_t LabelStore::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

size_t LabelStore::label_count() const {
  std::shared_lock lock(mu_);
  size_t n = 0;
  for (const auto &[_, e] : entries_) n += e.label.has_value();
  return n;
}

size_t LabelStore::log_records() const {
  std::shared_lock lock(mu_);
  return log_records_;
}

}  // namespace zsie
