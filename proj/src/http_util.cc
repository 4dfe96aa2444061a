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

#include "http_util.h"

#include <chrono>
#include <thread>

#include "httplib.h"
#include "zsie/errors.h"

namespace zsie::internal {

nlohmann::json PostJson(const std::string &base_url, const std::string &path,
                        const nlohmann::json &body, const PostOptions &options,
                        std::atomic<long> *requests) {
  const std::string payload = body.dump();
  std::string last_error;
  int attempts = std::max(1, options.max_attempts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(options.backoff_ms << (attempt - 1)));
    }
    httplib::Client client(base_url);
    auto timeout = std::chrono::milliseconds(options.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    if (requests != nullptr) requests->fetch_add(1);

    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = base_url + path + ": " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = base_url + path + ": HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError(base_url + path + ": HTTP " +
                               std::to_string(res->status) + " " + res->body,
                           false);
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error &e) {
      throw ProtocolError(base_url + path + ": malformed response: " +
                          e.what());
    }
  }
  throw TransportError(last_error + " (after " + std::to_string(attempts) +
                           " attempts)",
                       true);
}

}  // namespace zsie::internal
