// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/service.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "horse/error.hpp"
#include "horse/json_io.hpp"

namespace horse {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

HttpResponse json_response(int status, const json& body) {
  HttpResponse r;
  r.status = status;
  r.body = body.dump();
  return r;
}

HttpResponse fail(int status, const std::string& code, const std::string& message) {
  return json_response(status, json_io::error(code, message));
}

const std::string* param(const HttpRequest& req, const std::string& name) {
  auto it = req.params.find(name);
  return it == req.params.end() ? nullptr : &it->second;
}

std::string required(const HttpRequest& req, const std::string& name) {
  const std::string* v = param(req, name);
  if (!v) throw Error(Errc::parse_error, "missing query parameter '" + name + "'");
  return *v;
}

std::size_t count_param(const HttpRequest& req, const std::string& name, std::size_t fallback) {
  const std::string* v = param(req, name);
  if (!v) return fallback;
  std::size_t out = 0;
  const auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || end != v->data() + v->size() || out == 0) {
    throw Error(Errc::parse_error, "parameter '" + name + "' must be a positive integer");
  }
  return out;
}

std::string mime_type(const fs::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".png") return "image/png";
  if (ext == ".gif") return "image/gif";
  if (ext == ".webp") return "image/webp";
  if (ext == ".bmp") return "image/bmp";
  if (ext == ".svg") return "image/svg+xml";
  return "application/octet-stream";
}

}  // namespace

int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::parse_error:
    case Errc::query_parse:
    case Errc::empty_query:
    case Errc::query_too_large:
    case Errc::config_error:
      return 400;
    case Errc::not_found:
      return 404;
    case Errc::index_io:
    case Errc::index_corrupt:
    case Errc::version_mismatch:
    case Errc::empty_corpus:
      return 503;
    default:
      return 500;
  }
}

Service::Service(std::shared_ptr<const Engine> engine, fs::path image_root)
    : engine_(std::move(engine)), image_root_(std::move(image_root)) {}

HttpResponse Service::handle(const HttpRequest& request) const {
  try {
    return route(request);
  } catch (const Error& e) {
    return json_response(http_status(e.code()), json_io::error(e));
  } catch (const std::exception& e) {
    return fail(500, "InternalError", e.what());
  }
}

HttpResponse Service::route(const HttpRequest& req) const {
  if (req.method != "GET") return fail(405, "MethodNotAllowed", "only GET is supported");
  const std::string& path = req.path;
  if (!path.starts_with("/api/")) return fail(404, "NotFound", "no route for " + path);
  if (!engine_) return fail(503, "IndexUnavailable", "no index is loaded");
  const Engine& e = *engine_;

  if (path == "/api/search") {
    const std::string mode_text = param(req, "mode") ? *param(req, "mode") : "ranked";
    const auto mode = parse_match_mode(mode_text);
    if (!mode) throw Error(Errc::parse_error, "mode must be 'ranked' or 'strict'");
    return json_response(200, e.search(required(req, "q"), count_param(req, "k", 20), *mode));
  }
  if (path == "/api/explain") {
    return json_response(200, e.explain(required(req, "image"), required(req, "q")));
  }
  if (path == "/api/anomalies") return json_response(200, e.anomalies(count_param(req, "k", 10)));
  if (path == "/api/stats") return json_response(200, e.stats());
  if (path == "/api/priors") {
    return json_response(200, e.priors(required(req, "subject"), required(req, "object")));
  }
  constexpr std::string_view kImages = "/api/images/";
  if (path.starts_with(kImages)) {
    std::string id = path.substr(kImages.size());
    constexpr std::string_view kFile = "/file";
    if (id.ends_with(kFile) && !e.index().find(id)) {
      return image_file(id.substr(0, id.size() - kFile.size()));
    }
    return json_response(200, e.image(id));
  }
  return fail(404, "NotFound", "no route for " + path);
}

HttpResponse Service::image_file(const std::string& image_id) const {
  const auto file = engine_->image_file(image_id, image_root_);
  if (!file) return fail(404, "NotFound", "no image file available for '" + image_id + "'");
  std::ifstream in(*file, std::ios::binary);
  if (!in) return fail(404, "NotFound", "cannot read image file for '" + image_id + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  HttpResponse r;
  r.content_type = mime_type(*file);
  r.body = buf.str();
  return r;
}

void Service::install(httplib::Server& server) const {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.params.emplace(key, value);
    const HttpResponse out = handle(request);
    res.status = out.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(out.body, out.content_type);
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
}

void serve(const Service& service, const std::string& host, int port) {
  httplib::Server server;
  service.install(server);
  if (!server.listen(host, port)) {
    throw Error(Errc::io_error, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

}  // namespace horse
