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

#ifndef ZSIE_JSON_UTIL_H_
#define ZSIE_JSON_UTIL_H_

// Small helpers for reading the project's JSON file formats with
// path-qualified error messages.

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "zsie/errors.h"

namespace zsie {

// Parses `source`, mapping syntax errors to ParseError with line/column.
nlohmann::json ParseJson(std::string_view source);

const nlohmann::json &RequireObject(const nlohmann::json &j,
                                    const std::string &path);
const nlohmann::json &RequireArray(const nlohmann::json &j, const char *key,
                                   const std::string &path);
std::string RequireString(const nlohmann::json &j, const char *key,
                          const std::string &path);
double RequireNumber(const nlohmann::json &j, const char *key,
                     const std::string &path);
long RequireInt(const nlohmann::json &j, const char *key,
                const std::string &path);
std::optional<std::string> OptionalString(const nlohmann::json &j,
                                          const char *key,
                                          const std::string &path);
void RejectUnknownKeys(const nlohmann::json &j,
                       std::initializer_list<std::string_view> allowed,
                       const std::string &path);

// Reads a whole file. Throws Error if it cannot be opened.
std::string ReadFile(const std::string &path);

}  // namespace zsie

#endif  // ZSIE_JSON_UTIL_H_
