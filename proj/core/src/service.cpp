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

#include "agl/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <mutex>
#include <numeric>
#include <random>

#include "agl/error.hpp"
#include "agl/io.hpp"
#include "json_util.hpp"

namespace agl::service {
namespace {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string PercentEncode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

std::string SysError(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

bool IsWithin(const std::filesystem::path& root, const std::filesystem::path& p) {
  auto r = root.begin();
  auto q = p.begin();
  for (; r != root.end(); ++r, ++q) {
    if (r->empty()) continue;  // trailing separator
    if (q == p.end() || *r != *q) return false;
  }
  return true;
}

}  // namespace

std::string FormatUtc(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count();
  auto secs = static_cast<std::time_t>(ms / 1000);
  auto millis = static_cast<int>(ms % 1000);
  if (millis < 0) {
    millis += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, millis);
  return buf;
}

std::string EventToJson(const GuessEvent& e) {
  nlohmann::ordered_json j;
  j["session_id"] = e.session_id;
  j["sample_id"] = e.sample_id;
  j["latitude"] = e.latitude;
  j["longitude"] = e.longitude;
  j["submitted_at"] = e.submitted_at;
  j["distance_km"] = e.distance_km;
  j["geoscore"] = e.geoscore;
  return j.dump();
}

GuessEvent ParseEventJson(std::string_view text) {
  const io::Line line{1, std::string(text)};
  const auto j = json_util::ParseObjectLine(line);
  GuessEvent e;
  e.session_id = json_util::RequireString(j, "session_id", line);
  e.sample_id = json_util::RequireString(j, "sample_id", line);
  e.latitude = json_util::RequireNumber(j, "latitude", line);
  e.longitude = json_util::RequireNumber(j, "longitude", line);
  e.submitted_at = json_util::RequireString(j, "submitted_at", line);
  e.distance_km = json_util::RequireNumber(j, "distance_km", line);
  e.geoscore = json_util::RequireNumber(j, "geoscore", line);
  return e;
}

BenchService::BenchService(std::vector<eval::SampleRecord> samples,
                           std::filesystem::path audio_root,
                           std::filesystem::path log_path, std::uint64_t seed,
                           Clock clock)
    : samples_(std::move(samples)),
      audio_root_(std::move(audio_root)),
      log_path_(std::move(log_path)),
      seed_(seed),
      clock_(std::move(clock)) {
  std::sort(samples_.begin(), samples_.end(),
            [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (samples_[i].sample_id == samples_[i - 1].sample_id) {
      throw Error(ErrorCode::kDuplicate, "manifest lists '" + samples_[i].sample_id + "' twice");
    }
  }
  Replay();
  log_fd_ = ::open(log_path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (log_fd_ < 0) throw Error(ErrorCode::kIo, SysError("open " + log_path_.string()));
}

BenchService::~BenchService() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

const eval::SampleRecord* BenchService::Find(std::string_view sample_id) const {
  auto it = std::lower_bound(samples_.begin(), samples_.end(), sample_id,
                             [](const auto& s, std::string_view id) { return s.sample_id < id; });
  if (it == samples_.end() || it->sample_id != sample_id) return nullptr;
  return &*it;
}

std::vector<std::size_t> BenchService::Order(std::string_view session_id) const {
  std::vector<std::size_t> order(samples_.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(SplitMix64(seed_ ^ Fnv1a(session_id)));
  // Fisher-Yates with a modulo draw, so the order is the same on every
  // standard library.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  return order;
}

std::optional<ClipDescriptor> BenchService::NextClip(std::string_view session_id) const {
  if (session_id.empty()) throw Error(ErrorCode::kValidation, "session id is required");
  if (samples_.empty()) throw Error(ErrorCode::kNoContent, "manifest has no clips");
  const auto order = Order(session_id);
  std::shared_lock lock(mu_);
  const auto g = guessed_.find(session_id);
  for (const auto idx : order) {
    const auto& s = samples_[idx];
    if (g != guessed_.end() && g->second.count(s.sample_id)) continue;
    return ClipDescriptor{s.sample_id, "/v1/audio/" + PercentEncode(s.sample_id), s.duration_s};
  }
  return std::nullopt;
}

GuessResult BenchService::SubmitGuess(std::string_view session_id,
                                      std::string_view sample_id, double latitude,
                                      double longitude) {
  if (session_id.empty()) throw Error(ErrorCode::kValidation, "session id is required");
  std::optional<geo::GeoPoint> guess;
  try {
    guess.emplace(latitude, longitude);
  } catch (const Error& e) {
    throw Error(ErrorCode::kValidation, e.what());
  }
  const auto* sample = Find(sample_id);
  if (sample == nullptr) {
    throw Error(ErrorCode::kNotFound, "unknown sample '" + std::string(sample_id) + "'");
  }
  GuessEvent e;
  e.session_id = std::string(session_id);
  e.sample_id = sample->sample_id;
  e.latitude = latitude;
  e.longitude = longitude;
  e.distance_km = geo::HaversineKm(*guess, sample->truth);
  e.geoscore = geo::Geoscore(e.distance_km);

  std::unique_lock lock(mu_);
  auto g = guessed_.find(session_id);
  if (g != guessed_.end() && g->second.count(e.sample_id)) {
    throw Error(ErrorCode::kConflict, "session already guessed '" + e.sample_id + "'");
  }
  e.submitted_at = FormatUtc(clock_());
  Append(e);
  Apply(e);
  return GuessResult{std::move(e), sample->truth};
}

std::vector<LeaderboardRow> BenchService::Leaderboard(std::optional<std::size_t> limit) const {
  std::vector<LeaderboardRow> rows;
  {
    std::shared_lock lock(mu_);
    rows.reserve(aggregates_.size());
    for (const auto& [session, agg] : aggregates_) {
      const auto n = static_cast<double>(agg.guesses);
      rows.push_back({session, agg.guesses, agg.geoscore.Value() / n, agg.distance.Value() / n});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.mean_geoscore != b.mean_geoscore) return a.mean_geoscore > b.mean_geoscore;
    if (a.guesses != b.guesses) return a.guesses > b.guesses;
    return a.session_id < b.session_id;
  });
  if (limit && rows.size() > *limit) rows.resize(*limit);
  return rows;
}

std::optional<std::filesystem::path> BenchService::AudioPath(std::string_view sample_id) const {
  const auto* sample = Find(sample_id);
  if (sample == nullptr) return std::nullopt;
  std::error_code ec;
  const auto root = std::filesystem::weakly_canonical(audio_root_, ec);
  if (ec) return std::nullopt;
  const auto path = std::filesystem::weakly_canonical(root / sample->audio_path, ec);
  if (ec || !IsWithin(root, path) || !std::filesystem::is_regular_file(path, ec)) {
    return std::nullopt;
  }
  return path;
}

void BenchService::Apply(const GuessEvent& e) {
  auto g = guessed_.find(e.session_id);
  if (g == guessed_.end()) g = guessed_.emplace(e.session_id, std::set<std::string>{}).first;
  g->second.insert(e.sample_id);
  auto a = aggregates_.find(e.session_id);
  if (a == aggregates_.end()) a = aggregates_.emplace(e.session_id, Aggregate{}).first;
  ++a->second.guesses;
  a->second.geoscore.Add(e.geoscore);
  a->second.distance.Add(e.distance_km);
}

void BenchService::Replay() {
  std::error_code ec;
  if (!std::filesystem::exists(log_path_, ec)) return;
  const std::string text = io::ReadFile(log_path_);
  std::size_t pos = 0;
  std::size_t number = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const bool torn = nl == std::string::npos;
    const std::string_view line(text.data() + pos, (torn ? text.size() : nl) - pos);
    ++number;
    GuessEvent e;
    try {
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
        pos = torn ? text.size() : nl + 1;
        continue;
      }
      e = ParseEventJson(line);
    } catch (const Error& err) {
      if (!torn) {
        throw Error(ErrorCode::kParse, log_path_.string() + " record " +
                                           std::to_string(number) + ": " + err.what());
      }
      // A crash mid-append leaves an unterminated final line; drop it.
      std::filesystem::resize_file(log_path_, pos);
      warnings_.push_back("dropped torn final record in " + log_path_.string());
      break;
    }
    if (Find(e.sample_id) == nullptr) {
      throw Error(ErrorCode::kNotFound, log_path_.string() + " record " +
                                            std::to_string(number) + ": unknown sample '" +
                                            e.sample_id + "'");
    }
    auto g = guessed_.find(e.session_id);
    if (g != guessed_.end() && g->second.count(e.sample_id)) {
      throw Error(ErrorCode::kConflict, log_path_.string() + " record " +
                                            std::to_string(number) + ": repeated guess");
    }
    Apply(e);
    pos = torn ? text.size() : nl + 1;
    if (torn) {
      // Terminate the final record so later appends start on a fresh line.
      const int fd = ::open(log_path_.c_str(), O_WRONLY | O_APPEND | O_CLOEXEC);
      if (fd < 0 || ::write(fd, "\n", 1) != 1 || ::fsync(fd) != 0) {
        if (fd >= 0) ::close(fd);
        throw Error(ErrorCode::kIo, SysError("repair " + log_path_.string()));
      }
      ::close(fd);
    }
  }
}

void BenchService::Append(const GuessEvent& e) {
  const std::string line = EventToJson(e) + "\n";
  std::size_t done = 0;
  while (done < line.size()) {
    const auto n = ::write(log_fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo, SysError("append " + log_path_.string()));
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(log_fd_) != 0) throw Error(ErrorCode::kIo, SysError("fsync " + log_path_.string()));
}

}  // namespace agl::service
