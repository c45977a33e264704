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

// The `agl` command line: one binary, one verb per pipeline stage.

#ifndef AGL_TOOLS_CLI_HPP_
#define AGL_TOOLS_CLI_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace agl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Shared reference tables. Empty fields resolve against data_dir, which
// falls back to $AGL_DATA_DIR and then the installed data directory.
struct DataOptions {
  std::string data_dir;
  std::string gazetteer;
  std::string aliases;
  std::string ontology;
};

struct FilterCmd {
  std::vector<std::string> inputs;  // WAV files or directories
  std::string out;
  std::string thresholds;
  std::optional<double> rms_min, sf_max, cr_max, aci_min;
  std::size_t window = 2048;
  std::size_t hop = 1024;
};

struct FractionsCmd {
  std::string manifest;
  std::string tags_dir;  // <sample_id>.jsonl per sample
  std::string out;
};

struct AttributeCmd {
  std::string fractions;
  std::string judges;
  std::string errors;
  std::string out;
  std::string attribution_config;
  std::optional<double> alpha, gamma_km, theta;
  std::string consistency_out;
  std::size_t top_k = 10;
  std::string scores_out;
  std::string selected_out;
};

struct ScoreCmd {
  std::string fractions;
  std::string attribution;
  std::string out;
  std::string groups;     // JSONL {"sample_id","group"}
  std::string group_out;  // requires groups
};

struct SelectCmd {
  std::string scores;
  std::string out;
  std::string attribution_config;
  std::optional<double> theta;
};

struct EvaluateCmd {
  std::string manifest;
  std::string predictions;
  std::string out;  // directory
  std::vector<double> tau_km = {1.0, 10.0, 500.0};
  std::string model = "model";
};

struct BaselineCmd {
  std::string manifest;
  std::string out;
  std::uint64_t seed = 0;
};

struct ReportCmd {
  std::string summary;
  std::string out;  // stdout when empty
  std::string format = "markdown";
  std::string table = "main";  // main | percentiles
  std::string model = "model";
};

struct ServeCmd {
  std::string listen = "127.0.0.1:8080";
  std::string manifest;
  std::string audio_root;
  std::string log;
  std::string static_dir;
  std::uint64_t seed = 0;
};

using Verb = std::variant<FilterCmd, FractionsCmd, AttributeCmd, ScoreCmd, SelectCmd,
                          EvaluateCmd, BaselineCmd, ReportCmd, ServeCmd>;

struct Command {
  DataOptions data;
  Verb verb;
};

struct ParseResult {
  std::optional<Command> command;
  int exit_code = kExitOk;  // meaningful when command is empty
};

// `args` excludes the program name. Help and usage errors are written to
// `out` / `err` and reported through exit_code.
ParseResult ParseArgs(const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& err);

// Runs the verb. Errors go to `err` as "error[NN] name: message"; outputs
// are written atomically and removed again if the verb fails.
int Execute(const Command& cmd, std::ostream& out, std::ostream& err);

int Main(int argc, char** argv);

}  // namespace agl::cli

#endif  // AGL_TOOLS_CLI_HPP_
