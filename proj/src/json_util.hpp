// Copyright 2026 The atsg Authors.
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

#ifndef ATSG_SRC_JSON_UTIL_HPP_
#define ATSG_SRC_JSON_UTIL_HPP_

// Internal helpers for strict JSON reading: unknown keys are rejected and
// every error names the offending field.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "atsg/error.hpp"
#include "json.hpp"

namespace atsg::detail {

using Json = nlohmann::json;

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + pos, '\n');
    throw ParseError(source + ":" + std::to_string(line) + ": " + e.what());
  }
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

inline void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
}

inline void reject_unknown(const Json& j, const std::string& where,
                           std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(where + ": unknown field '" + key + "'");
    }
  }
}

inline const Json& field(const Json& j, const std::string& where,
                         const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

template <typename T>
T get_as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
}

template <typename T>
T get_field(const Json& j, const std::string& where, const std::string& key) {
  return get_as<T>(field(j, where, key), where + "." + key);
}

}  // namespace atsg::detail

#endif  // ATSG_SRC_JSON_UTIL_HPP_
