// Copyright 2026 The RadEx Authors
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

#ifndef RADEX_SRC_JSON_UTIL_HPP_
#define RADEX_SRC_JSON_UTIL_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "radex/error.hpp"

// Path-tracking accessors for reading the library's JSON file formats.
// Every failure is an Error(MalformedInput) naming the JSON path.
namespace radex::json_util {

using json = nlohmann::json;

inline json parse(std::string_view bytes, std::string_view what) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput,
                std::string(what) + " is not valid JSON: " + e.what());
  }
}

inline std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::MalformedInput, path + ": " + msg, path);
}

inline const json& require(const json& obj, std::string_view key,
                           const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "missing field");
  return *it;
}

inline std::string require_string(const json& obj, std::string_view key,
                                  const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

inline std::string optional_string(const json& obj, std::string_view key,
                                   const std::string& path,
                                   std::string fallback = {}) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_string()) fail(join(path, key), "expected a string");
  return it->get<std::string>();
}

inline std::int64_t require_int(const json& obj, std::string_view key,
                                const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<std::int64_t>();
}

inline const json& require_array(const json& obj, std::string_view key,
                                 const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_array()) fail(join(path, key), "expected an array");
  return v;
}

inline std::vector<std::string> string_array(const json& arr,
                                             const std::string& path) {
  if (!arr.is_array()) fail(path, "expected an array");
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) fail(index(path, i), "expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

}  // namespace radex::json_util

#endif  // RADEX_SRC_JSON_UTIL_HPP_
