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

#ifndef ZSIE_SRC_HTTP_UTIL_H_
#define ZSIE_SRC_HTTP_UTIL_H_

#include <atomic>
#include <string>

#include "json.hpp"

namespace zsie::internal {

struct PostOptions {
  int timeout_ms = 30000;
  int max_attempts = 3;
  int backoff_ms = 100;
};

// POSTs `body` as JSON to base_url + path and returns the parsed response.
// Connection failures and 5xx answers are retried with exponential backoff
// up to max_attempts; the final failure is a retryable TransportError. 4xx
// answers fail immediately (non-retryable); unparsable bodies raise
// ProtocolError. Each attempt increments `*requests` when non-null.
nlohmann::json PostJson(const std::string &base_url, const std::string &path,
                        const nlohmann::json &body, const PostOptions &options,
                        std::atomic<long> *requests = nullptr);

}  // namespace zsie::internal

#endif  // ZSIE_SRC_HTTP_UTIL_H_
