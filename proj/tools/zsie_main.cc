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

// zsie: command-line entry points.
//
//   zsie run --schema s.json [--config c.json] [--backend mock:o.json] doc.txt
//   zsie eval --gold gold.conll (--predictions p.json | --schema s.json ...)
//   zsie tune-threshold --dev devset.jsonl [--gold gold.jsonl]
//   zsie serve --schema s.json --port 8080

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "zsie/config.h"
#include "zsie/errors.h"
#include "zsie/eval.h"
#include "zsie/json_util.h"
#include "zsie/parallel.h"
#include "zsie/pipeline.h"
#include "zsie/schema.h"
#include "zsie/serialize.h"
#include "zsie/service.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kConfigError = 2;

// Usage or input error reported with exit code 2.
struct UsageError : zsie::Error {
  using zsie::Error::Error;
};

struct CommonFlags {
  std::string schema;
  std::string config;
  std::string backend;
  std::optional<double> threshold;
  int jobs = -1;
};

void AddCommon(CLI::App *cmd, CommonFlags *f, bool schema_required) {
  auto *s = cmd->add_option("--schema", f->schema, "schema file");
  if (schema_required) s->required();
  cmd->add_option("--config", f->config, "run config file");
  cmd->add_option("--backend", f->backend,
                  "mock:<oracle-file> or http:<url> (default mock)");
  cmd->add_option("--threshold", f->threshold, "decision threshold");
  cmd->add_option("--jobs", f->jobs, "worker threads (0 = one per CPU)");
}

std::string Read(const std::string &path) {
  try {
    return zsie::ReadFile(path);
  } catch (const zsie::Error &e) {
    throw UsageError(e.what());
  }
}

zsie::RunConfig LoadConfig(const CommonFlags &f) {
  zsie::RunConfig config;
  if (!f.config.empty()) config = zsie::load_run_config(Read(f.config));
  if (const char *env = std::getenv("ZSIE_BACKEND"); env && *env) {
    config.backend = env;
  }
  if (const char *env = std::getenv("ZSIE_TAGGER"); env && *env) {
    config.tagger = env;
  }
  if (!f.backend.empty()) config.backend = f.backend;
  if (config.backend == "mock") config.backend = "mock:";
  if (f.threshold) config.inference.threshold = *f.threshold;
  if (f.jobs >= 0) config.jobs = f.jobs;
  config.inference.Validate();
  return config;
}

zsie::Schema LoadSchema(const std::string &path) {
  return zsie::load_schema(Read(path));
}

void WriteOut(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw zsie::Error("cannot write " + path);
  out << content;
}

// ---- run

struct RunFlags {
  CommonFlags common;
  std::string mode = "e2e";
  std::string task;
  std::string gold;
  std::string out;
  std::vector<std::string> inputs;
  bool full = false;
};

int Run(const RunFlags &f) {
  zsie::Schema schema = LoadSchema(f.common.schema);
  zsie::RunConfig config = LoadConfig(f.common);
  std::optional<zsie::Task> task;
  if (f.mode == "task") {
    if (f.task.empty()) throw UsageError("--mode task needs --task");
    task = zsie::ParseTask(f.task);
    if (!task) throw UsageError("unknown task " + f.task);
  } else if (f.mode != "e2e") {
    throw UsageError("--mode must be e2e or task");
  } else if (!f.task.empty() || !f.gold.empty()) {
    throw UsageError("--task and --gold need --mode task");
  }
  std::optional<zsie::GoldSpans> gold;
  if (!f.gold.empty()) gold = zsie::GoldSpansFromJson(zsie::ParseJson(Read(f.gold)));
  std::vector<std::string> texts;
  for (const std::string &path : f.inputs) texts.push_back(Read(path));
  if (f.inputs.size() > 1 && !f.out.empty() && f.out != "-") {
    if (fs::exists(f.out) && !fs::is_directory(f.out)) {
      throw UsageError("--out must be a directory for several inputs");
    }
    fs::create_directories(f.out);
  }
  zsie::OwnedBackends owned = zsie::MakeBackends(config);
  zsie::Backends backends = owned.view();

  int status = kOk;
  json all = json::array();
  for (size_t i = 0; i < texts.size(); ++i) {
    zsie::DocumentAnnotations doc =
        task ? zsie::run_task(*task, texts[i], gold, schema, config, backends)
             : zsie::run_e2e(texts[i], schema, config, backends);
    if (!doc.complete) {
      std::cerr << f.inputs[i] << ": " << doc.error << "\n";
      status = kFailed;
    }
    json j = zsie::AnnotationsToJson(doc, f.full ? 0 : 5);
    if (f.inputs.size() > 1 && !f.out.empty() && f.out != "-") {
      fs::path name = fs::path(f.inputs[i]).filename();
      name.replace_extension(".json");
      WriteOut((fs::path(f.out) / name).string(), j.dump(2) + "\n");
    } else {
      all.push_back(std::move(j));
    }
  }
  if (f.inputs.size() == 1) {
    WriteOut(f.out, all[0].dump(2) + "\n");
  } else if (f.out.empty() || f.out == "-") {
    WriteOut(f.out, all.dump(2) + "\n");
  }
  return status;
}

// ---- eval

struct EvalFlags {
  CommonFlags common;
  std::string gold;
  std::string predictions;
  std::string task = "NER";
  std::string format = "text";
  std::string report_dir;
};

zsie::GoldCorpus LoadCorpusFile(const std::string &path) {
  std::string source = Read(path);
  std::string ext = fs::path(path).extension().string();
  if (ext == ".json") return zsie::load_corpus(source);
  return zsie::load_conll(source);
}

zsie::GoldSpans SpansOf(const zsie::GoldDocument &doc) {
  zsie::GoldSpans spans;
  spans.entities = doc.entities;
  for (const zsie::GoldEvent &e : doc.events) {
    spans.triggers.push_back({e.sentence_index, e.type, std::nullopt});
  }
  return spans;
}

int Eval(const EvalFlags &f) {
  std::optional<zsie::Task> task = zsie::ParseTask(f.task);
  if (!task) throw UsageError("unknown task " + f.task);
  if (f.format != "text" && f.format != "json") {
    throw UsageError("--format must be text or json");
  }
  zsie::GoldCorpus gold = LoadCorpusFile(f.gold);
  zsie::GoldCorpus predictions;
  if (!f.predictions.empty()) {
    predictions = LoadCorpusFile(f.predictions);
  } else {
    if (f.common.schema.empty()) {
      throw UsageError("eval needs --predictions or --schema for a live run");
    }
    zsie::Schema schema = LoadSchema(f.common.schema);
    zsie::RunConfig config = LoadConfig(f.common);
    zsie::OwnedBackends owned = zsie::MakeBackends(config);
    int jobs = config.jobs;
    config.jobs = 1;
    std::optional<zsie::GoldSpans> none;
    auto docs = zsie::ParallelMap(
        gold.documents.size(), jobs, [&](size_t i) {
          const zsie::GoldDocument &g = gold.documents[i];
          std::optional<zsie::GoldSpans> upstream;
          if (*task == zsie::Task::kRe || *task == zsie::Task::kEae) {
            upstream = SpansOf(g);
          }
          zsie::DocumentAnnotations doc = zsie::run_task_on_sentences(
              *task, g.sentences, upstream, schema, config, owned.view());
          if (!doc.complete) throw zsie::TransportError(doc.error, false);
          return zsie::PredictionsFromAnnotations(doc, g.id);
        });
    predictions.documents = std::move(docs);
  }
  zsie::ScoreReport report = zsie::score_task(predictions, gold, *task);
  std::string as_json = zsie::ReportToJson(report).dump(2) + "\n";
  std::string as_text = zsie::ReportToText(report);
  if (!f.report_dir.empty()) {
    fs::create_directories(f.report_dir);
    WriteOut((fs::path(f.report_dir) / "report.json").string(), as_json);
    WriteOut((fs::path(f.report_dir) / "report.txt").string(), as_text);
  }
  std::cout << (f.format == "json" ? as_json : as_text);
  return kOk;
}

// ---- tune-threshold

struct TuneFlags {
  std::string dev;
  std::string gold;
  double step = 0.01;
  std::string task = "NER";
  std::string format = "text";
};

std::vector<json> JsonLines(const std::string &source, const std::string &what) {
  std::vector<json> out;
  std::istringstream in(source);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(zsie::ParseJson(line));
    } catch (const zsie::ParseError &e) {
      throw zsie::ParseError(what + ": " + e.what(), number);
    }
  }
  return out;
}

int Tune(const TuneFlags &f) {
  std::optional<zsie::Task> task = zsie::ParseTask(f.task);
  if (!task) throw UsageError("unknown task " + f.task);
  std::vector<zsie::ScoredItem> items;
  std::vector<zsie::GoldItem> gold;
  for (const json &record : JsonLines(Read(f.dev), f.dev)) {
    bool wrapped = record.is_object() && record.contains("extraction");
    zsie::Extraction e = zsie::ExtractionFromJson(
        wrapped ? record["extraction"] : record, "dev");
    if (e.task != *task) continue;
    if (f.gold.empty()) {
      // Verdicts are the gold: unlabeled records carry no evidence.
      if (!wrapped || record["verdict"].is_null()) continue;
      auto verdict = zsie::ParseVerdict(record["verdict"].get<std::string>());
      if (!verdict) throw UsageError("bad verdict in " + f.dev);
      if (*verdict == zsie::Verdict::kCorrect) gold.push_back({e.id, e.best_type});
    }
    items.push_back({e.id, e.best_type, e.score});
  }
  if (!f.gold.empty()) {
    for (const json &g : JsonLines(Read(f.gold), f.gold)) {
      zsie::RequireObject(g, "gold");
      gold.push_back({zsie::RequireString(g, "id", "gold"),
                      zsie::RequireString(g, "label", "gold")});
    }
  }
  if (items.empty()) throw UsageError("empty dev set: " + f.dev);
  zsie::TuneResult result = zsie::tune_threshold(items, gold, f.step, *task);
  if (f.format == "json") {
    json j = zsie::ReportToJson(result.report);
    j["best_threshold"] = result.threshold;
    std::cout << j.dump(2) << "\n";
  } else {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "best_threshold %.2f\n", result.threshold);
    std::cout << buf << zsie::ReportToText(result.report);
  }
  return kOk;
}

// ---- serve

struct ServeFlags {
  CommonFlags common;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string state_dir;
  std::string ui;
};

int Serve(const ServeFlags &f) {
  zsie::Service::Options options;
  options.schema = LoadSchema(f.common.schema);
  options.config = LoadConfig(f.common);
  options.state_dir = f.state_dir;
  options.static_dir = f.ui;
  zsie::Service service(std::move(options));
  int port = service.Bind(f.host, f.port);
  std::cerr << "listening on " << f.host << ":" << port << "\n";
  service.Run();
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Zero-shot information extraction via textual entailment"};
  app.require_subcommand(1);

  RunFlags run;
  CLI::App *run_cmd = app.add_subcommand("run", "annotate text files");
  AddCommon(run_cmd, &run.common, true);
  run_cmd->add_option("--mode", run.mode, "e2e or task");
  run_cmd->add_option("--task", run.task, "NER, RE, EE or EAE (task mode)");
  run_cmd->add_option("--gold", run.gold, "gold spans JSON for task mode");
  run_cmd->add_option("--out", run.out, "output file, or directory for several inputs");
  run_cmd->add_flag("--full", run.full, "keep every ranked type");
  run_cmd->add_option("inputs", run.inputs, "text files")->required();

  EvalFlags eval;
  CLI::App *eval_cmd = app.add_subcommand("eval", "score predictions against gold");
  AddCommon(eval_cmd, &eval.common, false);
  eval_cmd->add_option("--gold", eval.gold, "CoNLL file or corpus JSON")->required();
  eval_cmd->add_option("--predictions", eval.predictions, "corpus JSON");
  eval_cmd->add_option("--task", eval.task, "NER, RE, EE or EAE");
  eval_cmd->add_option("--format", eval.format, "text or json");
  eval_cmd->add_option("--report-dir", eval.report_dir, "write report.json and report.txt");

  TuneFlags tune;
  CLI::App *tune_cmd =
      app.add_subcommand("tune-threshold", "pick the threshold maximizing F1");
  tune_cmd->add_option("--dev", tune.dev, "dev-set JSON lines")->required();
  tune_cmd->add_option("--gold", tune.gold, "JSON lines of {id, label}");
  tune_cmd->add_option("--step", tune.step, "grid step");
  tune_cmd->add_option("--task", tune.task, "NER, RE, EE or EAE");
  tune_cmd->add_option("--format", tune.format, "text or json");

  ServeFlags serve;
  CLI::App *serve_cmd = app.add_subcommand("serve", "run the HTTP API");
  AddCommon(serve_cmd, &serve.common, true);
  serve_cmd->add_option("--host", serve.host, "bind address");
  serve_cmd->add_option("--port", serve.port, "port");
  serve_cmd->add_option("--state-dir", serve.state_dir, "label log directory");
  serve_cmd->add_option("--ui", serve.ui, "built UI directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return Run(run);
    if (*eval_cmd) return Eval(eval);
    if (*tune_cmd) return Tune(tune);
    if (*serve_cmd) return Serve(serve);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const zsie::SchemaValidationError &e) {
    std::cerr << "error: invalid schema\n";
    for (const zsie::Violation &v : e.report()) {
      std::cerr << "  " << zsie::ToString(v) << "\n";
    }
    return kConfigError;
  } catch (const zsie::ParseError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const zsie::ValidationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const std::string &d : e.details()) std::cerr << "  " << d << "\n";
    return kConfigError;
  } catch (const zsie::ConfigurationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}
