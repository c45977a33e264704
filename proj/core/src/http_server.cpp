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

#include <charconv>
#include <exception>

#include "agl/error.hpp"
#include "agl/io.hpp"
#include "agl/service.hpp"
#include "httplib.h"
#include "json.hpp"

namespace agl::service {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kJson = "application/json; charset=utf-8";

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
    case ErrorCode::kParse:
    case ErrorCode::kCoordinateRange:
      return 400;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kNoContent: return 204;
    default: return 500;
  }
}

void SendJson(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void SendError(httplib::Response& res, const Error& e) {
  const int status = StatusFor(e.code());
  if (status == 204) {
    res.status = 204;
    return;
  }
  ordered_json body;
  body["error"] = {{"code", static_cast<int>(e.code())},
                   {"name", ErrorCodeName(e.code())},
                   {"message", e.what()}};
  SendJson(res, status, body);
}

ordered_json RowJson(const LeaderboardRow& r) {
  ordered_json j;
  j["session_id"] = r.session_id;
  j["guesses"] = r.guesses;
  j["mean_geoscore"] = r.mean_geoscore;
  j["mean_distance_km"] = r.mean_distance_km;
  return j;
}

double RequireCoordinate(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_number()) {
    throw Error(ErrorCode::kValidation, std::string("'") + key + "' must be a number");
  }
  return it->get<double>();
}

std::string RequireText(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw Error(ErrorCode::kValidation, std::string("'") + key + "' must be a non-empty string");
  }
  return it->get<std::string>();
}

}  // namespace

struct HttpServer::Impl {
  BenchService& service;
  httplib::Server server;

  explicit Impl(BenchService& s) : service(s) {}

  void Routes() {
    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          try {
            std::rethrow_exception(ep);
          } catch (const Error& e) {
            SendError(res, e);
          } catch (const std::exception& e) {
            SendError(res, Error(ErrorCode::kIo, e.what()));
          }
        });

    server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
      ordered_json j;
      j["status"] = "ok";
      j["clips"] = service.num_clips();
      SendJson(res, 200, j);
    });

    server.Get("/v1/clips/next", [this](const httplib::Request& req, httplib::Response& res) {
      const auto clip = service.NextClip(req.get_param_value("session"));
      ordered_json j;
      if (!clip) {
        j["exhausted"] = true;
      } else {
        j["sample_id"] = clip->sample_id;
        j["audio_url"] = clip->audio_url;
        j["duration_s"] = clip->duration_s;
      }
      SendJson(res, 200, j);
    });

    server.Get(R"(/v1/audio/([^/]+))", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
      const auto path = service.AudioPath(req.matches[1].str());
      if (!path) throw Error(ErrorCode::kNotFound, "no audio for '" + req.matches[1].str() + "'");
      res.set_header("Accept-Ranges", "bytes");
      res.set_content(io::ReadFile(*path), "audio/wav");
    });

    server.Post("/v1/guesses", [this](const httplib::Request& req, httplib::Response& res) {
      const json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
      if (body.is_discarded() || !body.is_object()) {
        throw Error(ErrorCode::kValidation, "request body must be a JSON object");
      }
      const auto result = service.SubmitGuess(
          RequireText(body, "session_id"), RequireText(body, "sample_id"),
          RequireCoordinate(body, "latitude"), RequireCoordinate(body, "longitude"));
      ordered_json j;
      j["session_id"] = result.event.session_id;
      j["sample_id"] = result.event.sample_id;
      j["distance_km"] = result.event.distance_km;
      j["geoscore"] = result.event.geoscore;
      j["submitted_at"] = result.event.submitted_at;
      j["truth"] = {{"latitude", result.truth.latitude_deg()},
                    {"longitude", result.truth.longitude_deg()}};
      SendJson(res, 200, j);
    });

    server.Get("/v1/leaderboard", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::size_t> limit;
      if (req.has_param("limit")) {
        const auto text = req.get_param_value("limit");
        std::size_t n = 0;
        const auto r = std::from_chars(text.data(), text.data() + text.size(), n);
        if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
          throw Error(ErrorCode::kValidation, "limit must be a non-negative integer");
        }
        limit = n;
      }
      ordered_json rows = ordered_json::array();
      for (const auto& row : service.Leaderboard(limit)) rows.push_back(RowJson(row));
      SendJson(res, 200, rows);
    });
  }
};

HttpServer::HttpServer(BenchService& service,
                       std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  impl_->Routes();
  if (static_dir && !impl_->server.set_mount_point("/", static_dir->string())) {
    throw Error(ErrorCode::kIo, "static directory " + static_dir->string() + " not found");
  }
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::Serve() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace agl::service
