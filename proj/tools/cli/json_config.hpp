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

// JSON reader producing CLI11 config items. Top-level scalar and array members
// apply to the running verb, and so does the object named after the verb:
//
//   {"data_dir": "share/agl", "evaluate": {"tau_list": [1, 10, 500]}}
//
// Objects named after other verbs are skipped. Underscores in keys are read
// as dashes so `gamma_km` sets --gamma-km.

#ifndef AGL_TOOLS_JSON_CONFIG_HPP_
#define AGL_TOOLS_JSON_CONFIG_HPP_

#include <algorithm>
#include <istream>
#include <iterator>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace agl::cli {

class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string verb) : verb_(std::move(verb)) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return {};
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const std::string text{std::istreambuf_iterator<char>(input), {}};
    const auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      throw CLI::ConversionError("config file must hold a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    Collect(j, /*top=*/true, items);
    return items;
  }

 private:
  void Collect(const nlohmann::json& obj, bool top,
               std::vector<CLI::ConfigItem>& items) const {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        if (top && key == verb_) Collect(value, /*top=*/false, items);
        continue;
      }
      CLI::ConfigItem item;
      item.name = key;
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items.push_back(std::move(item));
    }
  }

  static std::string Scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config values must be strings, numbers or booleans");
  }

  std::string verb_;
};

}  // namespace agl::cli

#endif  // AGL_TOOLS_JSON_CONFIG_HPP_
