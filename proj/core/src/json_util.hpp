/* Copyright 2026 The AGL Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Internal helpers for reading JSONL records with line-numbered errors.

#ifndef AGL_SRC_JSON_UTIL_HPP_
#define AGL_SRC_JSON_UTIL_HPP_

#include <string>

#include "agl/error.hpp"
#include "agl/io.hpp"
#include "json.hpp"

namespace agl::json_util {

inline std::string Where(const io::Line& line) {
  return "line " + std::to_string(line.number) + ": ";
}

inline nlohmann::json ParseObjectLine(const io::Line& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line.text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, Where(line) + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, Where(line) + "expected a JSON object");
  }
  return j;
}

inline const nlohmann::json& Require(const nlohmann::json& j, const char* key,
                                     const io::Line& line) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::kParse, Where(line) + "missing field '" + key + "'");
  }
  return *it;
}

inline std::string RequireString(const nlohmann::json& j, const char* key,
                                 const io::Line& line) {
  const auto& v = Require(j, key, line);
  if (!v.is_string()) {
    throw Error(ErrorCode::kParse, Where(line) + "field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

inline double RequireNumber(const nlohmann::json& j, const char* key,
                            const io::Line& line) {
  const auto& v = Require(j, key, line);
  if (!v.is_number()) {
    throw Error(ErrorCode::kParse, Where(line) + "field '" + key + "' must be a number");
  }
  return v.get<double>();
}

inline bool RequireBool(const nlohmann::json& j, const char* key,
                        const io::Line& line) {
  const auto& v = Require(j, key, line);
  if (!v.is_boolean()) {
    throw Error(ErrorCode::kParse, Where(line) + "field '" + key + "' must be a boolean");
  }
  return v.get<bool>();
}

inline const nlohmann::json& RequireObject(const nlohmann::json& j,
                                           const char* key,
                                           const io::Line& line) {
  const auto& v = Require(j, key, line);
  if (!v.is_object()) {
    throw Error(ErrorCode::kParse, Where(line) + "field '" + key + "' must be an object");
  }
  return v;
}

}  // namespace agl::json_util

#endif  // AGL_SRC_JSON_UTIL_HPP_
