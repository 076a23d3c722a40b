// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "horse/engine.hpp"
#include "horse/error.hpp"

namespace httplib {
class Server;
}

namespace horse {

struct HttpRequest {
  std::string method = "GET";
  std::string path;  // already percent-decoded
  std::map<std::string, std::string> params;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json; charset=utf-8";
  std::string body;
};

/// HTTP status used for an error code.
int http_status(Errc code) noexcept;

/// JSON API over an opened engine:
///
///   GET /api/search?q=&k=&mode=     GET /api/explain?image=&q=
///   GET /api/images/{id}            GET /api/images/{id}/file
///   GET /api/anomalies?k=           GET /api/stats
///   GET /api/priors?subject=&object=
///
/// Errors are { error, message, position? }. A null engine answers 503.
class Service {
 public:
  explicit Service(std::shared_ptr<const Engine> engine,
                   std::filesystem::path image_root = std::filesystem::current_path());

  HttpResponse handle(const HttpRequest& request) const;

  /// Routes every request of `server` through handle().
  void install(httplib::Server& server) const;

 private:
  HttpResponse route(const HttpRequest& request) const;
  HttpResponse image_file(const std::string& image_id) const;

  std::shared_ptr<const Engine> engine_;
  std::filesystem::path image_root_;
};

/// Blocks serving on host:port until the process is stopped.
void serve(const Service& service, const std::string& host, int port);

}  // namespace horse
