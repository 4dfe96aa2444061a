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

#ifndef ZSIE_SERVICE_H_
#define ZSIE_SERVICE_H_

#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "zsie/config.h"
#include "zsie/metrics.h"
#include "zsie/pipeline.h"
#include "zsie/schema.h"

namespace httplib {
class Server;
}

namespace zsie {

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string session = "default";  // X-Session header
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// The workbench API. Endpoints:
//
//   GET  /schema            current schema file (with its version)
//   PUT  /schema            replace the schema; 400 parse, 422 invalid
//   POST /analyze           {"text", "mode": "e2e"|"task", "task", "gold"}
//                           ?full=1 returns every ranked type
//   POST /label             {"extraction_id", "verdict"}; 404 unknown id
//   GET  /metrics           ?scope=task|type|template&sort=...&task=&order=
//   GET  /devset            JSON-lines export of this session
//   POST /devset            import a JSON-lines dev set
//   GET  /config, PUT /config
//
// Errors are {"error": code, "detail": ...}. Sessions are keyed by the
// X-Session header; each has its own extractions and labels.
class Service {
 public:
  struct Options {
    Schema schema;
    RunConfig config;
    // Label logs go to <state_dir>/labels-<session>.jsonl; in memory if empty.
    std::string state_dir;
    // Built UI assets served at /; none if empty.
    std::string static_dir;
    // Replace the backends built from the config (used by tests).
    std::optional<OwnedBackends> backends;
  };

  explicit Service(Options options);
  ~Service();

  HttpResponse handle(const HttpRequest &request);

  // Binds to `host`:`port` (0 picks a free port) and returns the port.
  int Bind(const std::string &host, int port);
  // Serves until Stop(). Requires Bind().
  void Run();
  void Stop();

  long schema_version() const;

 private:
  struct Session {
    explicit Session(std::unique_ptr<LabelStore> s) : store(std::move(s)) {}
    std::unique_ptr<LabelStore> store;
    // Ticket lock: analyze runs of one session execute in arrival order.
    std::mutex mu;
    std::condition_variable cv;
    unsigned long next_ticket = 0;
    unsigned long serving = 0;
  };

  struct Runtime {
    RunConfig config;
    OwnedBackends backends;
  };

  Session &SessionFor(const std::string &token);
  std::shared_ptr<const Schema> CurrentSchema() const;
  std::shared_ptr<const Runtime> CurrentRuntime() const;

  HttpResponse GetSchema();
  HttpResponse PutSchema(const HttpRequest &request);
  HttpResponse Analyze(const HttpRequest &request);
  HttpResponse Label(const HttpRequest &request);
  HttpResponse Metrics(const HttpRequest &request);
  HttpResponse GetDevset(const HttpRequest &request);
  HttpResponse PostDevset(const HttpRequest &request);
  HttpResponse GetConfig();
  HttpResponse PutConfig(const HttpRequest &request);

  Options options_;
  mutable std::mutex state_mu_;
  std::mutex schema_write_mu_;
  std::shared_ptr<const Schema> schema_;
  std::shared_ptr<const Runtime> runtime_;
  std::mutex sessions_mu_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace zsie

#endif  // ZSIE_SERVICE_H_
