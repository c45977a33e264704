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

#include "cli.hpp"

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "agl/audio.hpp"
#include "agl/error.hpp"
#include "agl/eval.hpp"
#include "agl/filters.hpp"
#include "agl/geo.hpp"
#include "agl/io.hpp"
#include "agl/localizability.hpp"
#include "agl/service.hpp"
#include "agl/tags.hpp"
#include "json.hpp"
#include "json_config.hpp"

namespace agl::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Collects every output of a verb and publishes them together: all temp
// files are written first, then renamed. On failure nothing new is left.
class OutputSet {
 public:
  void Stage(fs::path path, std::string content) {
    files_.emplace_back(std::move(path), std::move(content));
  }

  void Commit() {
    std::vector<fs::path> temps;
    std::vector<fs::path> published;
    try {
      for (const auto& [path, content] : files_) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        auto tmp = path;
        tmp += ".partial." + std::to_string(::getpid());
        temps.push_back(tmp);
        io::WriteFileAtomic(tmp, content);
      }
      for (std::size_t i = 0; i < files_.size(); ++i) {
        fs::rename(temps[i], files_[i].first);
        published.push_back(files_[i].first);
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& p : temps) fs::remove(p, ec);
      for (const auto& p : published) fs::remove(p, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

fs::path DataDir(const DataOptions& d) {
  if (!d.data_dir.empty()) return d.data_dir;
  if (const char* env = std::getenv("AGL_DATA_DIR"); env != nullptr && *env != '\0') return env;
  // An installed binary finds its tables at <prefix>/share/agl.
  std::error_code ec;
  const auto exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    const auto installed = exe.parent_path().parent_path() / "share" / "agl";
    if (fs::exists(installed / "gazetteer.csv", ec)) return installed;
  }
#ifdef AGL_DATA_DIR
  return AGL_DATA_DIR;
#else
  return "data";
#endif
}

fs::path DataFile(const DataOptions& d, const std::string& override_path,
                  const char* name) {
  return override_path.empty() ? DataDir(d) / name : fs::path(override_path);
}

const std::string& Required(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
  return value;
}

void MustExist(const fs::path& p, const char* flag) {
  std::error_code ec;
  if (!fs::exists(p, ec)) {
    throw UsageError(std::string(flag) + ": '" + p.string() + "' does not exist");
  }
}

fs::path Input(const std::string& value, const char* flag) {
  const fs::path p = Required(value, flag);
  MustExist(p, flag);
  return p;
}

struct Tables {
  geo::Gazetteer gazetteer;
  geo::AliasTable aliases;
};

Tables LoadTables(const DataOptions& d) {
  const auto gaz_path = DataFile(d, d.gazetteer, "gazetteer.csv");
  const auto alias_path = DataFile(d, d.aliases, "aliases.csv");
  MustExist(gaz_path, "--gazetteer");
  MustExist(alias_path, "--aliases");
  Tables t{geo::Gazetteer::Load(gaz_path), geo::AliasTable::Load(alias_path)};
  t.gazetteer.AddCanonicalNamesTo(t.aliases);
  return t;
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

bool IsWav(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".wav";
}

loc::AttributionConfig ResolveAttribution(const DataOptions& d, const std::string& file,
                                          std::optional<double> alpha,
                                          std::optional<double> gamma_km,
                                          std::optional<double> theta) {
  const auto path = DataFile(d, file, "attribution.json");
  MustExist(path, "--attribution-config");
  auto cfg = loc::LoadAttributionConfig(path);
  if (alpha) cfg.alpha = *alpha;
  if (gamma_km) cfg.gamma_km = *gamma_km;
  if (theta) cfg.theta = *theta;
  cfg.Validate();
  return cfg;
}

std::map<std::string, double> ScoresFor(std::span<const tags::CategoryFractions> fractions,
                                        std::span<const loc::CategoryAttribution> atts) {
  std::map<std::string, double> scores;
  for (const auto& f : fractions) {
    if (!scores.emplace(f.sample_id, loc::LocalizabilityScore(f, atts)).second) {
      throw Error(ErrorCode::kDuplicate, "fractions for '" + f.sample_id + "' listed twice");
    }
  }
  return scores;
}

std::string ScoresJsonl(const std::map<std::string, double>& scores) {
  std::vector<std::string> lines;
  for (const auto& [id, l] : scores) {
    ordered_json j;
    j["sample_id"] = id;
    j["localizability"] = l;
    lines.push_back(j.dump());
  }
  return JoinLines(lines);
}

std::string SelectedText(const std::map<std::string, double>& scores, double theta) {
  const auto selected = loc::SelectLocalizable(scores, theta);
  return JoinLines({selected.begin(), selected.end()});
}

std::map<std::string, std::string> ReadStringField(const fs::path& path, const char* key,
                                                   const char* value_key) {
  std::map<std::string, std::string> out;
  for (const auto& line : io::ReadLines(path)) {
    const auto j = nlohmann::json::parse(line.text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains(key) || !j[key].is_string() ||
        !j.contains(value_key) || !j[value_key].is_string()) {
      throw Error(ErrorCode::kParse, path.string() + " line " + std::to_string(line.number) +
                                         ": expected {\"" + key + "\", \"" + value_key + "\"}");
    }
    if (!out.emplace(j[key].get<std::string>(), j[value_key].get<std::string>()).second) {
      throw Error(ErrorCode::kDuplicate, path.string() + " line " +
                                             std::to_string(line.number) + ": repeated id");
    }
  }
  return out;
}

std::map<std::string, double> ReadScores(const fs::path& path) {
  std::map<std::string, double> out;
  for (const auto& line : io::ReadLines(path)) {
    const auto j = nlohmann::json::parse(line.text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("sample_id") ||
        !j["sample_id"].is_string() || !j.contains("localizability") ||
        !j["localizability"].is_number()) {
      throw Error(ErrorCode::kParse, path.string() + " line " + std::to_string(line.number) +
                                         ": expected {\"sample_id\", \"localizability\"}");
    }
    if (!out.emplace(j["sample_id"].get<std::string>(), j["localizability"].get<double>())
             .second) {
      throw Error(ErrorCode::kDuplicate, path.string() + " line " +
                                             std::to_string(line.number) + ": repeated id");
    }
  }
  return out;
}

// ---- verbs ----------------------------------------------------------------

void Run(const DataOptions& d, const FilterCmd& c, OutputSet& outputs, std::ostream&, std::ostream&) {
  if (c.inputs.empty()) throw UsageError("--input is required");
  const fs::path out = Required(c.out, "--out");
  std::vector<fs::path> roots;
  for (const auto& in : c.inputs) roots.push_back(Input(in, "--input"));
  const auto thr_path = DataFile(d, c.thresholds, "thresholds.json");
  MustExist(thr_path, "--thresholds");

  auto thr = filters::LoadThresholds(thr_path);
  if (c.rms_min) thr.rms_min = *c.rms_min;
  if (c.sf_max) thr.sf_max = *c.sf_max;
  if (c.cr_max) thr.cr_max = *c.cr_max;
  if (c.aci_min) thr.aci_min = *c.aci_min;
  thr.Validate();

  std::map<std::string, fs::path> files;  // label -> path, sorted by label
  for (const auto& root : roots) {
    if (fs::is_directory(root)) {
      for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file() || !IsWav(entry.path())) continue;
        const auto rel = fs::relative(entry.path(), root);
        files.emplace((root / rel).lexically_normal().generic_string(), entry.path());
      }
    } else {
      files.emplace(root.lexically_normal().generic_string(), root);
    }
  }
  std::vector<std::string> lines;
  for (const auto& [label, path] : files) {
    try {
      const auto clip = audio::ReadWavFile(path);
      lines.push_back(filters::ReportToJson(label, filters::ApplyFilters(clip, thr, c.window, c.hop)));
    } catch (const Error& e) {
      throw Error(e.code(), label + ": " + e.what());
    }
  }
  outputs.Stage(out, JoinLines(lines));
}

void Run(const DataOptions& d, const FractionsCmd& c, OutputSet& outputs, std::ostream&, std::ostream&) {
  const auto manifest = Input(c.manifest, "--manifest");
  const auto tags_dir = Input(c.tags_dir, "--tags-dir");
  const fs::path out = Required(c.out, "--out");
  const auto onto_path = DataFile(d, d.ontology, "ontology.txt");
  MustExist(onto_path, "--ontology");
  const auto tables = LoadTables(d);
  const auto ontology = tags::Ontology::Load(onto_path);
  auto samples = eval::LoadManifest(manifest, tables.gazetteer, tables.aliases);
  std::sort(samples.begin(), samples.end(),
            [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });
  std::vector<std::string> lines;
  for (const auto& s : samples) {
    const auto track = tags_dir / (s.sample_id + ".jsonl");
    if (!fs::exists(track)) {
      throw Error(ErrorCode::kNotFound, "no tag track " + track.string());
    }
    try {
      const auto segments = tags::LoadTagTrack(track, ontology);
      lines.push_back(tags::FractionsToJson(tags::TimeFractions(segments, s.duration_s, s.sample_id)));
    } catch (const Error& e) {
      throw Error(e.code(), track.string() + ": " + e.what());
    }
  }
  outputs.Stage(out, JoinLines(lines));
}

void Run(const DataOptions& d, const AttributeCmd& c, OutputSet& outputs, std::ostream&, std::ostream&) {
  const auto fractions_path = Input(c.fractions, "--fractions");
  const auto judges_path = Input(c.judges, "--judges");
  const auto errors_path = Input(c.errors, "--errors");
  const fs::path out = Required(c.out, "--out");
  const auto cfg = ResolveAttribution(d, c.attribution_config, c.alpha, c.gamma_km, c.theta);

  const auto fractions = tags::LoadFractions(fractions_path);
  const auto judges = loc::LoadJudgeTraces(judges_path);
  const auto errors = loc::LoadErrors(errors_path);
  const auto records = loc::BuildContributionRecords(fractions, judges, errors);
  const auto atts = loc::ClassifyCategories(records, cfg);
  std::vector<std::string> lines;
  for (const auto& a : atts) lines.push_back(loc::AttributionToJson(a));
  outputs.Stage(out, JoinLines(lines));

  if (!c.consistency_out.empty()) {
    outputs.Stage(c.consistency_out,
                  loc::ConsistencyToJson(loc::JudgeConsistency(judges, c.top_k)) + "\n");
  }
  if (!c.scores_out.empty() || !c.selected_out.empty()) {
    const auto scores = ScoresFor(fractions, atts);
    if (!c.scores_out.empty()) outputs.Stage(c.scores_out, ScoresJsonl(scores));
    if (!c.selected_out.empty()) outputs.Stage(c.selected_out, SelectedText(scores, cfg.theta));
  }
}

void Run(const DataOptions&, const ScoreCmd& c, OutputSet& outputs, std::ostream&, std::ostream&) {
  const auto fractions_path = Input(c.fractions, "--fractions");
  const auto att_path = Input(c.attribution, "--attribution");
  const fs::path out = Required(c.out, "--out");
  if (!c.group_out.empty() && c.groups.empty()) throw UsageError("--group-out needs --groups");
  const auto fractions = tags::LoadFractions(fractions_path);
  const auto atts = loc::LoadAttributions(att_path);
  const auto scores = ScoresFor(fractions, atts);
  outputs.Stage(out, ScoresJsonl(scores));
  if (!c.groups.empty()) {
    const auto groups = ReadStringField(Input(c.groups, "--groups"), "sample_id", "group");
    const auto means = loc::GroupMeanLocalizability(scores, groups);
    std::vector<std::string> lines;
    for (const auto& [group, mean] : means) {
      ordered_json j;
      j["group"] = group;
      j["mean_localizability"] = mean;
      lines.push_back(j.dump());
    }
    if (!c.group_out.empty()) outputs.Stage(c.group_out, JoinLines(lines));
  }
}

void Run(const DataOptions& d, const SelectCmd& c, OutputSet& outputs, std::ostream&, std::ostream&) {
  const auto scores_path = Input(c.scores, "--scores");
  const fs::path out = Required(c.out, "--out");
  const auto cfg = ResolveAttribution(d, c.attribution_config, std::nullopt, std::nullopt, c.theta);
  outputs.Stage(out, SelectedText(ReadScores(scores_path), cfg.theta));
}

void Run(const DataOptions& d, const EvaluateCmd& c, OutputSet& outputs, std::ostream&, std::ostream& err) {
  const auto manifest = Input(c.manifest, "--manifest");
  const auto predictions_path = Input(c.predictions, "--predictions");
  const fs::path out = Required(c.out, "--out");
  if (c.tau_km.empty()) throw UsageError("--tau-list needs at least one threshold");
  const auto tables = LoadTables(d);
  const auto samples = eval::LoadManifest(manifest, tables.gazetteer, tables.aliases);
  const auto predictions = eval::LoadPredictions(predictions_path);
  const auto result =
      eval::EvaluateDataset(samples, predictions, tables.aliases, &tables.gazetteer, c.tau_km);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';

  std::vector<std::string> lines;
  for (const auto& r : result.records) lines.push_back(eval::RecordToJson(r));
  const auto confusion = eval::BuildConfusion(result.records);
  outputs.Stage(out / "records.jsonl", JoinLines(lines));
  outputs.Stage(out / "summary.json", eval::SummaryToJson(result.summary));
  outputs.Stage(out / "report.csv", eval::EmitReport(result.summary, "csv", c.model));
  outputs.Stage(out / "report.md", eval::EmitReport(result.summary, "markdown", c.model));
  outputs.Stage(out / "percentiles.csv", eval::EmitPercentiles(result.summary, "csv", c.model));
  outputs.Stage(out / "confusion.csv", eval::EmitConfusion(confusion, "csv"));
  outputs.Stage(out / "confusion.md", eval::EmitConfusion(confusion, "markdown"));
}

void Run(const DataOptions& d, const BaselineCmd& c, OutputSet& outputs, std::ostream&, std::ostream&) {
  const auto manifest = Input(c.manifest, "--manifest");
  const fs::path out = Required(c.out, "--out");
  const auto tables = LoadTables(d);
  const auto samples = eval::LoadManifest(manifest, tables.gazetteer, tables.aliases);
  std::vector<std::string> lines;
  for (const auto& p : eval::RandomBaseline(samples, c.seed, tables.gazetteer)) {
    lines.push_back(eval::PredictionToJson(p));
  }
  outputs.Stage(out, JoinLines(lines));
}

void Run(const DataOptions&, const ReportCmd& c, OutputSet& outputs, std::ostream& out, std::ostream&) {
  const auto summary = eval::ParseSummaryJson(io::ReadFile(Input(c.summary, "--summary")));
  std::string text;
  if (c.table == "main") {
    text = eval::EmitReport(summary, c.format, c.model);
  } else if (c.table == "percentiles") {
    text = eval::EmitPercentiles(summary, c.format, c.model);
  } else {
    throw UsageError("--table must be main or percentiles");
  }
  if (c.out.empty()) {
    out << text;
  } else {
    outputs.Stage(c.out, text);
  }
}

void RunServe(const DataOptions& d, const ServeCmd& c, std::ostream& out) {
  const auto manifest = Input(c.manifest, "--manifest");
  const auto audio_root = Input(c.audio_root, "--audio-root");
  const fs::path log = Required(c.log, "--log");
  std::optional<fs::path> static_dir;
  if (!c.static_dir.empty()) static_dir = Input(c.static_dir, "--static-dir");
  const auto colon = c.listen.rfind(':');
  int port = -1;
  if (colon != std::string::npos) {
    const auto* b = c.listen.data() + colon + 1;
    const auto* e = c.listen.data() + c.listen.size();
    const auto r = std::from_chars(b, e, port);
    if (r.ec != std::errc() || r.ptr != e) port = -1;
  }
  if (port < 0 || port > 65535) throw UsageError("--listen must be HOST:PORT");
  const std::string host = c.listen.substr(0, colon);

  const auto tables = LoadTables(d);
  auto samples = eval::LoadManifest(manifest, tables.gazetteer, tables.aliases);

  // Block termination signals before any server thread starts; a dedicated
  // thread waits for them and stops the server.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  service::BenchService svc(std::move(samples), audio_root, log, c.seed);
  for (const auto& w : svc.warnings()) std::cerr << "warning: " << w << '\n';
  service::HttpServer server(svc, static_dir);
  const int bound = server.Bind(host, port);
  out << "listening on http://" << host << ':' << bound << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.Stop();
  });
  server.Serve();
  // Serve only returns after Stop, so the waiter has finished or is about to.
  waiter.join();
}

// ---- parsing --------------------------------------------------------------

void AddDataDir(CLI::App* sub, DataOptions& d) {
  sub->add_option("--data-dir", d.data_dir, "Directory with the shipped reference tables")
      ->envname("AGL_DATA_DIR");
}

void AddPlaceTables(CLI::App* sub, DataOptions& d) {
  sub->add_option("--gazetteer", d.gazetteer, "country,continent[,latitude,longitude] CSV");
  sub->add_option("--aliases", d.aliases, "level,alias,canonical CSV");
}

template <typename T>
void AddOptional(CLI::App* sub, const std::string& name, std::optional<T>& target,
                 const std::string& help) {
  sub->add_option_function<T>(
      name, [&target](const T& v) { target = v; }, help);
}

CLI::App* AddVerb(CLI::App& app, const char* name, const char* help,
                  std::map<std::string, std::string>& configs) {
  auto* sub = app.add_subcommand(name, help);
  sub->add_option("--config", configs[name], "JSON file supplying any flag of this verb");
  return sub;
}

// CLI11 reads config files only for the top-level app, so a verb's --config
// is applied after parsing: each item fills an option that neither the
// command line nor the environment has set.
void ApplyConfig(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  const JsonConfig reader(sub->get_name());
  for (const auto& item : reader.from_config(in)) {
    CLI::Option* opt = item.name == "config" ? nullptr : sub->get_option_no_throw("--" + item.name);
    if (opt == nullptr) throw CLI::ConfigError("unknown config key '" + item.name + "'");
    if (opt->count() > 0) continue;
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

// Accept the Greek spelling of --tau-list.
std::vector<std::string> Normalize(const std::vector<std::string>& args) {
  static const std::string kGreek = "--\xCF\x84-list";
  std::vector<std::string> out;
  for (const auto& a : args) {
    if (a.rfind(kGreek, 0) == 0) {
      out.push_back("--tau-list" + a.substr(kGreek.size()));
    } else {
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace

ParseResult ParseArgs(const std::vector<std::string>& raw_args, std::ostream& out,
                      std::ostream& err) {
  CLI::App app{"Audio geo-localization toolkit", "agl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "agl 0.1.0");

  DataOptions data;
  FilterCmd filter;
  FractionsCmd fractions;
  AttributeCmd attribute;
  ScoreCmd score;
  SelectCmd select;
  EvaluateCmd evaluate;
  BaselineCmd baseline;
  ReportCmd report;
  ServeCmd serve;
  std::map<std::string, std::string> configs;  // verb -> --config path

  auto* f = AddVerb(app, "filter", "Screen WAV recordings with the four quality filters", configs);
  AddDataDir(f, data);
  f->add_option("--input", filter.inputs, "WAV files or directories (recursive)");
  f->add_option("--out", filter.out, "Output JSONL of filter reports");
  f->add_option("--thresholds", filter.thresholds, "Threshold JSON (default: shipped)");
  AddOptional(f, "--rms-min", filter.rms_min, "Override rms_min");
  AddOptional(f, "--sf-max", filter.sf_max, "Override sf_max");
  AddOptional(f, "--cr-max", filter.cr_max, "Override cr_max");
  AddOptional(f, "--aci-min", filter.aci_min, "Override aci_min");
  f->add_option("--window", filter.window, "STFT window size")->capture_default_str();
  f->add_option("--hop", filter.hop, "STFT hop size")->capture_default_str();

  auto* fr = AddVerb(app, "fractions", "Reduce tag tracks to per-category time fractions", configs);
  AddDataDir(fr, data);
  AddPlaceTables(fr, data);
  fr->add_option("--ontology", data.ontology, "Category list (default: shipped)");
  fr->add_option("--manifest", fractions.manifest, "Manifest JSONL");
  fr->add_option("--tags-dir", fractions.tags_dir, "Directory of <sample_id>.jsonl tag tracks");
  fr->add_option("--out", fractions.out, "Output fractions JSONL");

  auto* at = AddVerb(app, "attribute", "Fit per-category attribution slopes", configs);
  AddDataDir(at, data);
  at->add_option("--fractions", attribute.fractions, "Fractions JSONL");
  at->add_option("--judges", attribute.judges, "Judge traces JSONL");
  at->add_option("--errors", attribute.errors, "Distance errors JSONL");
  at->add_option("--out", attribute.out, "Output attribution JSONL");
  at->add_option("--attribution-config", attribute.attribution_config,
                 "alpha/gamma_km/theta JSON (default: shipped)");
  AddOptional(at, "--alpha", attribute.alpha, "Membership slope threshold");
  AddOptional(at, "--gamma-km", attribute.gamma_km, "Low/high error split in km");
  AddOptional(at, "--theta", attribute.theta, "Selection threshold");
  at->add_option("--consistency-out", attribute.consistency_out, "Judge agreement JSON");
  at->add_option("--top-k", attribute.top_k, "k for top-k overlap")->capture_default_str();
  at->add_option("--scores-out", attribute.scores_out, "Also write localizability scores");
  at->add_option("--selected-out", attribute.selected_out, "Also write selected ids");

  auto* sc = AddVerb(app, "score", "Compute per-recording localizability", configs);
  sc->add_option("--fractions", score.fractions, "Fractions JSONL");
  sc->add_option("--attribution", score.attribution, "Attribution JSONL");
  sc->add_option("--out", score.out, "Output scores JSONL");
  sc->add_option("--groups", score.groups, "JSONL {\"sample_id\",\"group\"}");
  sc->add_option("--group-out", score.group_out, "Output group means JSONL");

  auto* se = AddVerb(app, "select", "List recordings whose localizability exceeds theta", configs);
  AddDataDir(se, data);
  se->add_option("--scores", select.scores, "Scores JSONL");
  se->add_option("--out", select.out, "Output id list");
  se->add_option("--attribution-config", select.attribution_config,
                 "Config supplying theta (default: shipped)");
  AddOptional(se, "--theta", select.theta, "Selection threshold");

  auto* ev = AddVerb(app, "evaluate", "Score model predictions against the manifest", configs);
  AddDataDir(ev, data);
  AddPlaceTables(ev, data);
  ev->add_option("--manifest", evaluate.manifest, "Manifest JSONL");
  ev->add_option("--predictions", evaluate.predictions, "Predictions JSONL");
  ev->add_option("--out", evaluate.out, "Output directory");
  ev->add_option("--tau-list", evaluate.tau_km, "Distance thresholds in km")
      ->delimiter(',')
      ->capture_default_str();
  ev->add_option("--model", evaluate.model, "Model label for reports")->capture_default_str();

  auto* ba = AddVerb(app, "baseline", "Random-point baseline predictions", configs);
  AddDataDir(ba, data);
  AddPlaceTables(ba, data);
  ba->add_option("--manifest", baseline.manifest, "Manifest JSONL");
  ba->add_option("--out", baseline.out, "Output predictions JSONL");
  ba->add_option("--seed", baseline.seed, "Random seed")->capture_default_str();

  auto* re = AddVerb(app, "report", "Render a saved summary", configs);
  re->add_option("--summary", report.summary, "summary.json from evaluate");
  re->add_option("--out", report.out, "Output file (default: stdout)");
  re->add_option("--format", report.format, "csv or markdown")->capture_default_str();
  re->add_option("--table", report.table, "main or percentiles")->capture_default_str();
  re->add_option("--model", report.model, "Model label")->capture_default_str();

  auto* sv = AddVerb(app, "serve", "Run the guessing-arena HTTP service", configs);
  AddDataDir(sv, data);
  AddPlaceTables(sv, data);
  sv->add_option("--listen", serve.listen, "HOST:PORT")->envname("AGL_LISTEN")->capture_default_str();
  sv->add_option("--manifest", serve.manifest, "Manifest JSONL")->envname("AGL_MANIFEST");
  sv->add_option("--audio-root", serve.audio_root, "Root for manifest audio paths")
      ->envname("AGL_AUDIO_ROOT");
  sv->add_option("--log", serve.log, "Append-only guess log")->envname("AGL_LOG_PATH");
  sv->add_option("--static-dir", serve.static_dir, "Static assets served at /")
      ->envname("AGL_STATIC_DIR");
  sv->add_option("--seed", serve.seed, "Clip shuffle seed")->envname("AGL_SEED")->capture_default_str();

  try {
    auto args = Normalize(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    for (auto* sub : app.get_subcommands()) {
      if (const auto& path = configs[sub->get_name()]; !path.empty()) ApplyConfig(sub, path);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? kExitOk : kExitUsage};
  }

  Command cmd{data, filter};
  if (fr->parsed()) cmd.verb = fractions;
  if (at->parsed()) cmd.verb = attribute;
  if (sc->parsed()) cmd.verb = score;
  if (se->parsed()) cmd.verb = select;
  if (ev->parsed()) cmd.verb = evaluate;
  if (ba->parsed()) cmd.verb = baseline;
  if (re->parsed()) cmd.verb = report;
  if (sv->parsed()) cmd.verb = serve;
  return {std::move(cmd), kExitOk};
}

int Execute(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    OutputSet outputs;
    std::visit(
        [&](const auto& verb) {
          if constexpr (std::is_same_v<std::decay_t<decltype(verb)>, ServeCmd>) {
            RunServe(cmd.data, verb, out);
          } else {
            Run(cmd.data, verb, outputs, out, err);
          }
        },
        cmd.verb);
    outputs.Commit();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error[" << static_cast<int>(e.code()) << "] " << ErrorCodeName(e.code()) << ": "
        << e.what() << '\n';
    return e.code() == ErrorCode::kConfig ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int Main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto parsed = ParseArgs(args, std::cout, std::cerr);
  if (!parsed.command) return parsed.exit_code;
  return Execute(*parsed.command, std::cout, std::cerr);
}

}  // namespace agl::cli
