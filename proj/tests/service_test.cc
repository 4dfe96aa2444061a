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

#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include <unistd.h>

#include "fixtures.h"
#include "httplib.h"
#include "json.hpp"
#include "zsie/json_util.h"

namespace zsie {
namespace {

using nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  ServiceTest() : service_(MakeOptions()) {}

  static Service::Options MakeOptions(std::string state_dir = "") {
    Service::Options o;
    o.schema = fixtures::SampleSchema();
    o.state_dir = std::move(state_dir);
    OwnedBackends b;
    b.entailment = std::make_shared<MockBackend>(fixtures::ObituaryBackend());
    o.backends = b;
    return o;
  }

  HttpResponse Call(const std::string &method, const std::string &path,
                    const std::string &body = "", const std::string &session = "default",
                    std::map<std::string, std::string> query = {}) {
    return service_.handle({method, path, std::move(query), session, body});
  }

  json Analyze(const json &request, int expect = 200, std::map<std::string, std::string> query = {}) {
    HttpResponse r = Call("POST", "/analyze", request.dump(), "default", std::move(query));
    EXPECT_EQ(r.status, expect) << r.body;
    return json::parse(r.body);
  }

  Service service_;
};

TEST_F(ServiceTest, GetSchema) {
  HttpResponse r = Call("GET", "/schema");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, save_schema(fixtures::SampleSchema()));
}

TEST_F(ServiceTest, PutSchemaBumpsVersion) {
  Schema s = fixtures::SampleSchema();
  s.entity_types.push_back({"CITY", {{"t0", "{X} is a city"}}});
  HttpResponse r = Call("PUT", "/schema", save_schema(s));
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(json::parse(r.body)["version"], 2);
  s.version = 2;
  EXPECT_EQ(Call("GET", "/schema").body, save_schema(s));
  json a = Analyze({{"text", fixtures::kObituary}});
  EXPECT_EQ(a["provenance"]["schema_version"], 2);
}

TEST_F(ServiceTest, PutInvalidSchema) {
  std::string before = Call("GET", "/schema").body;
  HttpResponse r = Call("PUT", "/schema", R"({"entity_types": [{"name": "PERSON",
      "templates": ["{X} is a person"]}], "relation_types": [{"name": "per:date_of_death",
      "templates": ["{X} died on {Y}"], "allowed_pairs": [{"left": "PERSON", "right": "DATE"}]}]})");
  EXPECT_EQ(r.status, 422);
  json body = json::parse(r.body);
  EXPECT_EQ(body["error"], "validation");
  EXPECT_EQ(body["detail"][0]["message"], "unresolved entity type DATE");
  EXPECT_EQ(Call("PUT", "/schema", "{oops").status, 400);
  EXPECT_EQ(Call("GET", "/schema").body, before);
  EXPECT_EQ(service_.schema_version(), 1);
}

TEST_F(ServiceTest, AnalyzeObituary) {
  json a = Analyze({{"text", fixtures::kObituary}, {"mode", "e2e"}});
  EXPECT_EQ(a["entities"].size(), 4u);
  EXPECT_EQ(a["events"].size(), 1u);
  EXPECT_EQ(a["arguments"].size(), 3u);
  EXPECT_EQ(a["provenance"]["schema_version"], 1);
  EXPECT_EQ(a["entities"][0]["ranked"].size(), 4u);
  EXPECT_EQ(a["entities"][0]["ranked"][0]["type"], "PERSON");
  EXPECT_EQ(a["entities"][1]["template_text"], "{X} is a company");
  // Replaying the request gives the same payload.
  EXPECT_EQ(Analyze({{"text", fixtures::kObituary}, {"mode", "e2e"}}), a);
}

TEST_F(ServiceTest, RankedListTruncatedUnlessFull) {
  Schema s = fixtures::SampleSchema();
  for (const char *t : {"A1", "A2", "A3"}) {
    s.entity_types.push_back({t, {{"t0", std::string("{X} is ") + t}}});
  }
  ASSERT_EQ(Call("PUT", "/schema", save_schema(s)).status, 200);
  json a = Analyze({{"text", fixtures::kObituary}});
  EXPECT_EQ(a["entities"][0]["ranked"].size(), 5u);
  json full = Analyze({{"text", fixtures::kObituary}}, 200, {{"full", "1"}});
  EXPECT_EQ(full["entities"][0]["ranked"].size(), 7u);
}

TEST_F(ServiceTest, AnalyzeEmptyText) {
  json a = Analyze({{"text", ""}});
  EXPECT_TRUE(a["entities"].empty());
  EXPECT_TRUE(a["sentences"].empty());
}

TEST_F(ServiceTest, AnalyzeErrors) {
  json eae = Analyze({{"text", fixtures::kObituary}, {"mode", "task"}, {"task", "EAE"}}, 409);
  EXPECT_EQ(eae["error"], "configuration");
  Analyze({{"text", "x"}, {"mode", "batch"}}, 400);
  Analyze({{"text", "x"}, {"mode", "task"}}, 400);
  Analyze({{"text", "x"}, {"mode", "task"}, {"task", "XX"}}, 400);
  Analyze({{"mode", "e2e"}}, 400);
  Analyze({{"text", fixtures::kObituary}, {"mode", "task"}, {"task", "RE"},
           {"gold", {{"entities", {{{"sentence", 0}, {"start", 0}, {"end", 99}, {"type", "PERSON"}}}}}}},
          400);
  EXPECT_EQ(Call("POST", "/analyze", "not json").status, 400);
  EXPECT_EQ(Call("GET", "/nowhere").status, 404);
  EXPECT_EQ(Call("DELETE", "/schema").status, 405);
}

TEST_F(ServiceTest, TaskModeWithGold) {
  json a = Analyze({{"text", fixtures::kObituary}, {"mode", "task"}, {"task", "RE"},
                    {"gold", {{"entities", {{{"sentence", 0}, {"start", 0}, {"end", 10}, {"type", "PERSON"}},
                                            {{"sentence", 0}, {"start", 58}, {"end", 64}, {"type", "DATE"}}}}}}});
  EXPECT_TRUE(a["entities"].empty());
  ASSERT_EQ(a["relations"].size(), 1u);
  EXPECT_EQ(a["relations"][0]["label"], "per:date_of_death");
  EXPECT_EQ(a["gold"]["entities"].size(), 2u);
}

TEST_F(ServiceTest, LabelThenMetrics) {
  json a = Analyze({{"text", fixtures::kObituary}});
  std::string florida = a["entities"][2]["id"];
  HttpResponse r = Call("POST", "/label",
                        json{{"extraction_id", florida}, {"verdict", "incorrect"}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  json m = json::parse(Call("GET", "/metrics", "", "default", {{"scope", "template"}}).body);
  bool found = false;
  for (const auto &row : m["rows"]) {
    if (row["name"] == "NER/GPE/t0") {
      found = true;
      EXPECT_EQ(row["incorrect"], 1);
      EXPECT_EQ(row["template_text"], "{X} is a location");
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(ServiceTest, MetricsSortedByAccuracy) {
  json a = Analyze({{"text", fixtures::kObituary}});
  auto label = [&](const json &e, const char *v) {
    Call("POST", "/label", json{{"extraction_id", e["id"]}, {"verdict", v}}.dump());
  };
  label(a["entities"][0], "correct");
  label(a["entities"][1], "incorrect");
  label(a["entities"][2], "correct");
  json m = json::parse(Call("GET", "/metrics", "", "default",
                            {{"scope", "type"}, {"sort", "accuracy"}, {"task", "NER"}}).body);
  std::vector<std::string> names;
  for (const auto &row : m["rows"]) names.push_back(row["name"]);
  EXPECT_EQ(names, (std::vector<std::string>{"NER/GPE", "NER/PERSON", "NER/ORG", "NER/DATE"}));
  EXPECT_EQ(Call("GET", "/metrics", "", "default", {{"sort", "colour"}}).status, 400);
}

TEST_F(ServiceTest, LabelErrors) {
  json a = Analyze({{"text", fixtures::kObituary}});
  std::string id = a["entities"][0]["id"];
  HttpResponse foreign = Call("POST", "/label",
                              json{{"extraction_id", id}, {"verdict", "correct"}}.dump(), "other");
  EXPECT_EQ(foreign.status, 404);
  EXPECT_EQ(Call("POST", "/label", json{{"extraction_id", "nope"}, {"verdict", "correct"}}.dump()).status, 404);
  EXPECT_EQ(Call("POST", "/label", json{{"extraction_id", id}, {"verdict", "maybe"}}.dump()).status, 400);
  EXPECT_EQ(Call("GET", "/schema", "", "bad token!").status, 400);
}

TEST_F(ServiceTest, DevsetRoundTripAcrossSessions) {
  json a = Analyze({{"text", fixtures::kObituary}});
  Call("POST", "/label", json{{"extraction_id", a["entities"][0]["id"]}, {"verdict", "correct"}}.dump());
  HttpResponse exported = Call("GET", "/devset");
  EXPECT_EQ(exported.content_type, "application/x-ndjson");
  HttpResponse imported = Call("POST", "/devset", exported.body, "copy");
  ASSERT_EQ(imported.status, 200) << imported.body;
  EXPECT_EQ(json::parse(imported.body)["labels"], 1);
  EXPECT_EQ(Call("GET", "/devset", "", "copy").body, exported.body);
  EXPECT_EQ(Call("POST", "/devset", "junk\n").status, 400);
}

TEST_F(ServiceTest, ConfigGetPut) {
  json c = json::parse(Call("GET", "/config").body);
  EXPECT_EQ(c["threshold"], 0.5);
  c["threshold"] = 0.9;
  ASSERT_EQ(Call("PUT", "/config", c.dump()).status, 200);
  json a = Analyze({{"text", fixtures::kObituary}});
  EXPECT_EQ(a["entities"].size(), 3u);
  EXPECT_EQ(Call("PUT", "/config", R"({"threshold": 2})").status, 400);
  EXPECT_EQ(Call("PUT", "/config", R"({"colour": 2})").status, 400);
}

TEST(ServiceStateTest, LabelsSurviveRestart) {
  std::string dir = (std::filesystem::temp_directory_path() /
                     ("zsie_service_" + std::to_string(::getpid()))).string();
  std::filesystem::remove_all(dir);
  auto options = [&] {
    Service::Options o;
    o.schema = fixtures::SampleSchema();
    o.state_dir = dir;
    OwnedBackends b;
    b.entailment = std::make_shared<MockBackend>(fixtures::ObituaryBackend());
    o.backends = b;
    return o;
  };
  std::string id;
  {
    Service s(options());
    HttpResponse r = s.handle({"POST", "/analyze", {}, "alice",
                               json{{"text", fixtures::kObituary}}.dump()});
    id = json::parse(r.body)["entities"][0]["id"];
    s.handle({"POST", "/label", {}, "alice",
              json{{"extraction_id", id}, {"verdict", "incorrect"}}.dump()});
  }
  Service s(options());
  json m = json::parse(s.handle({"GET", "/metrics", {{"scope", "task"}}, "alice", ""}).body);
  ASSERT_EQ(m["rows"].size(), 1u);
  EXPECT_EQ(m["rows"][0]["incorrect"], 1);
  std::filesystem::remove_all(dir);
}

class FailingBackend : public EntailmentBackend {
 public:
  std::vector<EntailmentScore> entail_batch(const std::string &,
                                            const std::vector<std::string> &) const override {
    throw TransportError("sidecar unreachable", true);
  }
};

TEST(ServiceFailureTest, BackendFailureIs502WithPartialBody) {
  Service::Options o;
  o.schema = fixtures::SampleSchema();
  OwnedBackends b;
  b.entailment = std::make_shared<FailingBackend>();
  o.backends = b;
  Service s(std::move(o));
  HttpResponse r = s.handle({"POST", "/analyze", {}, "default",
                             json{{"text", fixtures::kObituary}}.dump()});
  EXPECT_EQ(r.status, 502);
  json body = json::parse(r.body);
  EXPECT_EQ(body["error"], "backend");
  EXPECT_EQ(body["partial"]["complete"], false);
}

TEST(ServiceHttpTest, ServesOverLoopback) {
  Service::Options o;
  o.schema = fixtures::SampleSchema();
  OwnedBackends b;
  b.entailment = std::make_shared<MockBackend>(fixtures::ObituaryBackend());
  o.backends = b;
  Service service(std::move(o));
  int port = service.Bind("127.0.0.1", 0);
  std::thread t([&] { service.Run(); });
  httplib::Client client("127.0.0.1", port);
  httplib::Result r;
  for (int i = 0; i < 50 && !r; ++i) {
    r = client.Get("/schema");
    if (!r) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  httplib::Headers session = {{"X-Session", "web"}};
  auto a = client.Post("/analyze", session, json{{"text", fixtures::kObituary}}.dump(),
                       "application/json");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->status, 200);
  std::string id = json::parse(a->body)["entities"][0]["id"];
  auto l = client.Post("/label", session,
                       json{{"extraction_id", id}, {"verdict", "correct"}}.dump(),
                       "application/json");
  EXPECT_EQ(l->status, 200);
  EXPECT_EQ(client.Post("/label", json{{"extraction_id", id}, {"verdict", "correct"}}.dump(),
                        "application/json")->status,
            404);
  auto m = client.Get("/metrics?scope=task&task=NER", session);
  EXPECT_EQ(json::parse(m->body)["rows"][0]["correct"], 1) << m->body;
  service.Stop();
  t.join();
}

}  // namespace
}  // namespace zsie
