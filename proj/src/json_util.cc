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

#include "zsie/json_util.h"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace zsie {

using nlohmann::json;

nlohmann::json ParseJson(std::string_view source) {
  try {
    return json::parse(source.begin(), source.end());
  } catch (const json::parse_error &e) {
    // Translate the byte offset into a 1-based line and column.
    size_t offset = std::min<size_t>(e.byte, source.size());
    int line = 1;
    int column = 1;
    for (size_t i = 0; i + 1 < offset; ++i) {
      if (source[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    size_t colon = what.find("syntax error");
    if (colon != std::string::npos) what = what.substr(colon);
    throw ParseError(what, line, column);
  }
}

const json &RequireObject(const json &j, const std::string &path) {
  if (!j.is_object()) throw ParseError(path + ": expected object");
  return j;
}

const json &RequireArray(const json &j, const char *key,
                         const std::string &path) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing key \"" + key + "\"");
  if (!it->is_array()) throw ParseError(path + "." + key + ": expected array");
  return *it;
}

std::string RequireString(const json &j, const char *key,
                          const std::string &path) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing key \"" + key + "\"");
  if (!it->is_string()) {
    throw ParseError(path + "." + key + ": expected string");
  }
  return it->get<std::string>();
}

double RequireNumber(const json &j, const char *key, const std::string &path) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing key \"" + key + "\"");
  if (!it->is_number()) {
    throw ParseError(path + "." + key + ": expected number");
  }
  return it->get<double>();
}

long RequireInt(const json &j, const char *key, const std::string &path) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing key \"" + key + "\"");
  if (!it->is_number_integer()) {
    throw ParseError(path + "." + key + ": expected integer");
  }
  return it->get<long>();
}

std::optional<std::string> OptionalString(const json &j, const char *key,
                                          const std::string &path) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw ParseError(path + "." + key + ": expected string");
  }
  return it->get<std::string>();
}

void RejectUnknownKeys(const json &j,
                       std::initializer_list<std::string_view> allowed,
                       const std::string &path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ParseError(path + ": unknown key \"" + it.key() + "\"");
    }
  }
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace zsie
