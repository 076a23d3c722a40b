// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "horse/cli.hpp"
#include "horse/engine.hpp"
#include "horse/service.hpp"
#include "oracles/fixtures.hpp"

using namespace horse;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  fs::path root = fs::temp_directory_path() / "horse-test-service";
  fs::path index_dir = root / "index";
  std::shared_ptr<const Engine> engine;

  Fixture() {
    fs::remove_all(root);
    fs::create_directories(root / "images");
    std::ofstream(root / "images" / "tbl-044.png", std::ios::binary) << "\x89PNG fake bytes";
    auto corpus = fixture::red_ball_on_table_corpus();
    const EngineConfig cfg;
    RelationPriors priors = fit(corpus.graphs);
    build_index(std::move(corpus.graphs), std::move(priors), index_dir, index_snapshot(cfg));
    engine = std::make_shared<const Engine>(Engine::open(index_dir));
  }
  ~Fixture() { fs::remove_all(root); }
};

Fixture& shared() {
  static Fixture f;
  return f;
}

HttpResponse get(const Service& s, std::string path, std::map<std::string, std::string> params = {}) {
  return s.handle(HttpRequest{"GET", std::move(path), std::move(params)});
}

std::string run(std::vector<std::string> args, int* code = nullptr) {
  std::vector<const char*> argv = {"horse"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code) *code = rc;
  return out.str();
}

}  // namespace

TEST_CASE("status mapping") {
  CHECK(http_status(Errc::query_parse) == 400);
  CHECK(http_status(Errc::empty_query) == 400);
  CHECK(http_status(Errc::query_too_large) == 400);
  CHECK(http_status(Errc::not_found) == 404);
  CHECK(http_status(Errc::index_corrupt) == 503);
  CHECK(http_status(Errc::io_error) == 500);
}

TEST_CASE("search echoes the parsed graph") {
  const Service s(shared().engine, shared().root);
  const HttpResponse r = get(s, "/api/search", {{"q", "red ball"}});
  CHECK(r.status == 200);
  CHECK(r.content_type == "application/json; charset=utf-8");
  const json body = json::parse(r.body);
  REQUIRE(body["parsed"]["nodes"].size() == 1);
  CHECK(body["parsed"]["nodes"][0]["label"] == "ball");
  CHECK(body["parsed"]["nodes"][0]["color"] == "red");
  REQUIRE(body["results"].size() == 20);
  CHECK(body["results"][9]["score"] == 1.0);
  CHECK(body["results"][10]["score"] == 0.0);
  CHECK(body["k"] == 20);
  CHECK(body["mode"] == "ranked");
}

TEST_CASE("search: strict fixture query finds the known image") {
  const Service s(shared().engine, shared().root);
  const json body = json::parse(get(s, "/api/search", {{"q", "red ball on table"}, {"mode", "strict"}}).body);
  REQUIRE(body["results"].size() == 1);
  CHECK(body["results"][0]["image_id"] == "tbl-044");
  CHECK(body["results"][0]["score"] == 1.0);
  const json k1 = json::parse(get(s, "/api/search", {{"q", "ball"}, {"k", "1"}}).body);
  CHECK(k1["results"].size() == 1);
}

TEST_CASE("query errors are 400 with a position") {
  const Service s(shared().engine, shared().root);
  const HttpResponse r = get(s, "/api/search", {{"q", "ball on"}});
  CHECK(r.status == 400);
  const json body = json::parse(r.body);
  CHECK(body["error"] == "ParseError");
  CHECK(body["position"] == 7);
  CHECK(body["message"].get<std::string>().find("dangling") != std::string::npos);
  CHECK(get(s, "/api/search", {{"q", "  "}}).status == 400);
  CHECK(get(s, "/api/search").status == 400);
  CHECK(get(s, "/api/search", {{"q", "ball"}, {"k", "zero"}}).status == 400);
  CHECK(get(s, "/api/search", {{"q", "ball"}, {"mode", "fuzzy"}}).status == 400);
}

TEST_CASE("stats, priors and anomalies") {
  const Service s(shared().engine, shared().root);
  const json stats = json::parse(get(s, "/api/stats").body);
  CHECK(stats["images"] == 100);
  CHECK(stats["format_version"] == kIndexFormatVersion);
  const json priors = json::parse(get(s, "/api/priors", {{"subject", "balls"}, {"object", "table"}}).body);
  CHECK(priors["subject"] == "ball");
  CHECK(priors["pair_total"] == 100);
  // 91 balls rest on the table
  CHECK(priors["probabilities"]["on"].get<double>() == doctest::Approx(92.0 / 102.0));
  const json anomalies = json::parse(get(s, "/api/anomalies", {{"k", "3"}}).body);
  CHECK(anomalies["reports"].size() == 3);
}

TEST_CASE("images and explain") {
  const Service s(shared().engine, shared().root);
  const HttpResponse img = get(s, "/api/images/tbl-044");
  CHECK(img.status == 200);
  const json g = json::parse(img.body);
  CHECK(g["image_id"] == "tbl-044");
  CHECK(g["objects"].size() == 3);
  CHECK(get(s, "/api/images/missing").status == 404);
  CHECK(json::parse(get(s, "/api/images/missing").body)["error"] == "NotFound");

  const HttpResponse file = get(s, "/api/images/tbl-044/file");
  CHECK(file.status == 200);
  CHECK(file.content_type == "image/png");
  CHECK(file.body == "\x89PNG fake bytes");
  CHECK(get(s, "/api/images/tbl-000/file").status == 404);

  const HttpResponse ex = get(s, "/api/explain", {{"image", "tbl-044"}, {"q", "ball on table"}});
  CHECK(ex.status == 200);
  CHECK(ex.body.find("|y_max(ball) - y_min(table)|") != std::string::npos);
  CHECK(get(s, "/api/explain", {{"image", "nope"}, {"q", "ball"}}).status == 404);
}

TEST_CASE("unknown routes, methods and a missing index") {
  const Service s(shared().engine, shared().root);
  CHECK(get(s, "/api/nothing").status == 404);
  CHECK(get(s, "/").status == 404);
  CHECK(s.handle(HttpRequest{"POST", "/api/stats", {}}).status == 405);
  const Service empty(nullptr);
  const HttpResponse r = get(empty, "/api/stats");
  CHECK(r.status == 503);
  CHECK(json::parse(r.body)["error"] == "IndexUnavailable");
}

TEST_CASE("responses are identical across requests") {
  const Service a(shared().engine, shared().root);
  const Service b(std::make_shared<const Engine>(Engine::open(shared().index_dir)), shared().root);
  for (const char* q : {"red ball on table", "cup near ball", "big table"}) {
    CHECK(get(a, "/api/search", {{"q", q}}).body == get(a, "/api/search", {{"q", q}}).body);
    CHECK(get(a, "/api/search", {{"q", q}}).body == get(b, "/api/search", {{"q", q}}).body);
  }
}

TEST_CASE("command line and HTTP answers agree") {
  const Service s(shared().engine, shared().root);
  const std::string dir = shared().index_dir.string();
  for (const char* q : {"red ball on table", "ball", "white cup near round ball"}) {
    CAPTURE(q);
    for (const char* mode : {"ranked", "strict"}) {
      int code = -1;
      const json cli = json::parse(run({"search", "--index", dir, q, "--k", "7", "--mode", mode, "--json"}, &code));
      CHECK(code == 0);
      const json http = json::parse(get(s, "/api/search", {{"q", q}, {"k", "7"}, {"mode", mode}}).body);
      CHECK(cli == http);
    }
  }
  const json cli_ex = json::parse(run({"explain", "--index", dir, "--image", "tbl-004", "red ball on table", "--json"}));
  const json http_ex = json::parse(get(s, "/api/explain", {{"image", "tbl-004"}, {"q", "red ball on table"}}).body);
  CHECK(cli_ex == http_ex);
  const json cli_an = json::parse(run({"anomalies", "--index", dir, "--k", "5", "--json"}));
  CHECK(cli_an == json::parse(get(s, "/api/anomalies", {{"k", "5"}}).body));
}

TEST_CASE("live server round trip") {
  const Service s(shared().engine, shared().root);
  httplib::Server server;
  s.install(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  client.set_url_encode(false);
  auto res = client.Get("/api/search?q=red+ball+on+table&mode=strict");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
  CHECK(res->get_header_value("Content-Type") == "application/json; charset=utf-8");
  CHECK(json::parse(res->body)["results"][0]["image_id"] == "tbl-044");

  auto bad = client.Get("/api/search?q=ball%20on");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  CHECK(json::parse(bad->body)["position"] == 7);

  auto file = client.Get("/api/images/tbl-044/file");
  REQUIRE(file);
  CHECK(file->status == 200);
  CHECK(file->body == "\x89PNG fake bytes");

  auto options = client.Options("/api/search");
  REQUIRE(options);
  CHECK(options->status == 204);

  server.stop();
  worker.join();
}
