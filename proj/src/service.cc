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

#include "zsie/service.h"

#include <cctype>
#include <filesystem>

#include "httplib.h"
#include "zsie/errors.h"
#include "zsie/json_util.h"
#include "zsie/serialize.h"

namespace zsie {

using nlohmann::json;

namespace {

constexpr size_t kRankedTypes = 5;

HttpResponse Json(int status, const json &body) {
  return {status, body.dump() + "\n", "application/json"};
}

HttpResponse Fail(int status, const std::string &code, const json &detail) {
  return Json(status, {{"error", code}, {"detail", detail}});
}

json ViolationsJson(const ValidationReport &report) {
  json out = json::array();
  for (const Violation &v : report) {
    out.push_back({{"path", v.path}, {"message", v.message}});
  }
  return out;
}

bool ValidSessionToken(const std::string &token) {
  if (token.empty() || token.size() > 64) return false;
  for (unsigned char c : token) {
    if (!std::isalnum(c) && c != '-' && c != '_') return false;
  }
  return true;
}

std::string Param(const HttpRequest &r, const std::string &key) {
  auto it = r.query.find(key);
  return it == r.query.end() ? std::string() : it->second;
}

}  // namespace

Service::Service(Options options) : options_(std::move(options)) {
  validate_schema(options_.schema);
  schema_ = std::make_shared<const Schema>(options_.schema);
  auto runtime = std::make_shared<Runtime>();
  runtime->config = options_.config;
  runtime->backends = options_.backends ? *options_.backends
                                        : MakeBackends(options_.config);
  runtime_ = std::move(runtime);
  if (!options_.state_dir.empty()) {
    std::filesystem::create_directories(options_.state_dir);
  }
}

Service::~Service() { Stop(); }

long Service::schema_version() const { return CurrentSchema()->version; }

std::shared_ptr<const Schema> Service::CurrentSchema() const {
  std::lock_guard lock(state_mu_);
  return schema_;
}

std::shared_ptr<const Service::Runtime> Service::CurrentRuntime() const {
  std::lock_guard lock(state_mu_);
  return runtime_;
}

Service::Session &Service::SessionFor(const std::string &token) {
  std::lock_guard lock(sessions_mu_);
  auto it = sessions_.find(token);
  if (it != sessions_.end()) return *it->second;
  std::unique_ptr<LabelStore> store;
  if (options_.state_dir.empty()) {
    store = std::make_unique<LabelStore>();
  } else {
    store = std::make_unique<LabelStore>(
        (std::filesystem::path(options_.state_dir) /
         ("labels-" + token + ".jsonl"))
            .string());
  }
  store->SetSchema(*CurrentSchema());
  auto session = std::make_unique<Session>(std::move(store));
  Session &ref = *session;
  sessions_.emplace(token, std::move(session));
  return ref;
}

HttpResponse Service::handle(const HttpRequest &request) {
  try {
    if (!ValidSessionToken(request.session)) {
      return Fail(400, "bad_request", "invalid session token");
    }
    const std::string &m = request.method;
    const std::string &p = request.path;
    if (p == "/schema") {
      if (m == "GET") return GetSchema();
      if (m == "PUT") return PutSchema(request);
    } else if (p == "/analyze") {
      if (m == "POST") return Analyze(request);
    } else if (p == "/label") {
      if (m == "POST") return Label(request);
    } else if (p == "/metrics") {
      if (m == "GET") return Metrics(request);
    } else if (p == "/devset") {
      if (m == "GET") return GetDevset(request);
      if (m == "POST") return PostDevset(request);
    } else if (p == "/config") {
      if (m == "GET") return GetConfig();
      if (m == "PUT") return PutConfig(request);
    } else {
      return Fail(404, "not_found", "no endpoint " + p);
    }
    return Fail(405, "method_not_allowed", m + " " + p);
  } catch (const SchemaValidationError &e) {
    return Fail(422, "validation", ViolationsJson(e.report()));
  } catch (const ParseError &e) {
    return Fail(400, "parse", e.what());
  } catch (const ValidationError &e) {
    json detail = e.details().empty() ? json(e.what()) : json(e.details());
    return Fail(400, "invalid", detail);
  } catch (const NotFoundError &e) {
    return Fail(404, "not_found", e.what());
  } catch (const ConfigurationError &e) {
    return Fail(409, "configuration", e.what());
  } catch (const TransportError &e) {
    return Fail(502, "backend", e.what());
  } catch (const std::exception &e) {
    return Fail(500, "internal", e.what());
  }
}

HttpResponse Service::GetSchema() {
  return {200, save_schema(*CurrentSchema()), "application/json"};
}

HttpResponse Service::PutSchema(const HttpRequest &request) {
  // load_schema validates; nothing is committed on failure.
  Schema next = load_schema(request.body);
  std::lock_guard write(schema_write_mu_);
  next.version = CurrentSchema()->version + 1;
  auto snapshot = std::make_shared<const Schema>(std::move(next));
  {
    std::lock_guard lock(state_mu_);
    schema_ = snapshot;
  }
  {
    std::lock_guard lock(sessions_mu_);
    for (auto &[_, session] : sessions_) session->store->SetSchema(*snapshot);
  }
  return Json(200, {{"version", snapshot->version}});
}

HttpResponse Service::Analyze(const HttpRequest &request) {
  json body = ParseJson(request.body);
  RequireObject(body, "request");
  RejectUnknownKeys(body, {"text", "mode", "task", "gold"}, "request");
  std::string text = RequireString(body, "text", "request");
  std::string mode = OptionalString(body, "mode", "request").value_or("e2e");
  std::optional<Task> task;
  if (auto name = OptionalString(body, "task", "request")) {
    task = ParseTask(*name);
    if (!task) return Fail(400, "bad_request", "unknown task " + *name);
  }
  std::optional<GoldSpans> gold;
  if (body.contains("gold") && !body["gold"].is_null()) {
    gold = GoldSpansFromJson(body["gold"]);
  }
  if (mode == "e2e") {
    if (task || gold) {
      return Fail(400, "bad_request", "task and gold apply to task mode only");
    }
  } else if (mode == "task") {
    if (!task) return Fail(400, "bad_request", "task mode needs a task");
  } else {
    return Fail(400, "bad_request", "mode must be e2e or task");
  }
  bool full = Param(request, "full") == "1";

  Session &session = SessionFor(request.session);
  unsigned long ticket;
  {
    std::unique_lock lock(session.mu);
    ticket = session.next_ticket++;
    session.cv.wait(lock, [&] { return session.serving == ticket; });
  }
  struct Release {
    Session &s;
    ~Release() {
      {
        std::lock_guard lock(s.mu);
        s.serving++;
      }
      s.cv.notify_all();
    }
  } release{session};

  std::shared_ptr<const Schema> schema = CurrentSchema();
  std::shared_ptr<const Runtime> runtime = CurrentRuntime();
  Backends backends = runtime->backends.view();
  DocumentAnnotations doc =
      mode == "e2e"
          ? run_e2e(text, *schema, runtime->config, backends)
          : run_task(*task, text, gold, *schema, runtime->config, backends);
  for (const Extraction *e : doc.AllExtractions()) session.store->Register(*e);
  json out = AnnotationsToJson(doc, full ? 0 : kRankedTypes);
  if (!doc.complete) {
    return Json(502, {{"error", "backend"}, {"detail", doc.error},
                      {"partial", out}});
  }
  return Json(200, out);
}

HttpResponse Service::Label(const HttpRequest &request) {
  json body = ParseJson(request.body);
  RequireObject(body, "label");
  RejectUnknownKeys(body, {"extraction_id", "verdict"}, "label");
  std::string id = RequireString(body, "extraction_id", "label");
  std::string name = RequireString(body, "verdict", "label");
  std::optional<Verdict> verdict = ParseVerdict(name);
  if (!verdict) return Fail(400, "bad_request", "unknown verdict " + name);
  Session &session = SessionFor(request.session);
  session.store->record_label(id, *verdict);
  UserLabel label = *session.store->LabelOf(id);
  return Json(200, {{"extraction_id", label.extraction_id},
                    {"verdict", std::string(VerdictName(label.verdict))},
                    {"timestamp", label.timestamp_ms}});
}

HttpResponse Service::Metrics(const HttpRequest &request) {
  MetricsQuery query;
  if (std::string s = Param(request, "scope"); !s.empty()) {
    query.scope = ParseScope(s);
    if (!query.scope) return Fail(400, "bad_request", "unknown scope " + s);
  }
  if (std::string s = Param(request, "task"); !s.empty()) {
    query.task = ParseTask(s);
    if (!query.task) return Fail(400, "bad_request", "unknown task " + s);
  }
  if (std::string s = Param(request, "sort"); !s.empty()) {
    std::optional<SortKey> key = ParseSortKey(s);
    if (!key) return Fail(400, "bad_request", "unknown sort key " + s);
    query.sort = *key;
  }
  std::string order = Param(request, "order");
  if (order == "asc") {
    query.ascending = true;
  } else if (!order.empty() && order != "desc") {
    return Fail(400, "bad_request", "order must be asc or desc");
  }
  Session &session = SessionFor(request.session);
  json rows = json::array();
  for (const MetricsRow &row : session.store->metrics(query)) {
    rows.push_back(MetricsRowToJson(row));
  }
  return Json(200, {{"rows", rows}});
}

HttpResponse Service::GetDevset(const HttpRequest &request) {
  return {200, SessionFor(request.session).store->export_devset(),
          "application/x-ndjson"};
}

HttpResponse Service::PostDevset(const HttpRequest &request) {
  LabelStore &store = *SessionFor(request.session).store;
  std::vector<std::string> warnings = store.import_devset(request.body);
  return Json(200, {{"size", store.size()},
                    {"labels", store.label_count()},
                    {"warnings", warnings}});
}

HttpResponse Service::GetConfig() {
  return Json(200, RunConfigToJson(CurrentRuntime()->config));
}

HttpResponse Service::PutConfig(const HttpRequest &request) {
  RunConfig config = load_run_config(request.body);
  auto runtime = std::make_shared<Runtime>();
  runtime->config = config;
  try {
    runtime->backends =
        options_.backends ? *options_.backends : MakeBackends(config);
  } catch (const Error &e) {
    return Fail(422, "validation", e.what());
  }
  std::lock_guard lock(state_mu_);
  runtime_ = std::move(runtime);
  return Json(200, RunConfigToJson(config));
}

int Service::Bind(const std::string &host, int port) {
  server_ = std::make_unique<httplib::Server>();
  auto route = [this](const httplib::Request &req, httplib::Response &res) {
    HttpRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto &[k, v] : req.params) r.query[k] = v;
    if (req.has_header("X-Session")) r.session = req.get_header_value("X-Session");
    r.body = req.body;
    HttpResponse out = handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  for (const char *path :
       {"/schema", "/analyze", "/label", "/metrics", "/devset", "/config"}) {
    server_->Get(path, route);
    server_->Put(path, route);
    server_->Post(path, route);
  }
  if (!options_.static_dir.empty() &&
      !server_->set_mount_point("/", options_.static_dir)) {
    throw ConfigurationError("UI directory not found: " + options_.static_dir);
  }
  if (port == 0) return server_->bind_to_any_port(host);
  if (!server_->bind_to_port(host, port)) {
    throw ConfigurationError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Service::Run() {
  if (!server_) throw Error("Run() before Bind()");
  server_->listen_after_bind();
}

void Service::Stop() {
  if (server_) server_->stop();
}

}  // namespace zsie
