// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "horse/config.hpp"
#include "horse/engine.hpp"
#include "horse/service.hpp"
#include "horse/synthetic.hpp"

namespace horse {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kGrammarHint =
    "hint: queries look like \"red ball on table\" or \"person left of car, dog near person\"";

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

void print_query_error(std::ostream& err, const Error& e, const std::string& query) {
  err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
  if (e.position() && e.code() == Errc::query_parse) {
    err << "  " << query << "\n  " << std::string(*e.position(), ' ') << "^\n";
  }
  if (e.code() == Errc::query_parse || e.code() == Errc::empty_query) err << kGrammarHint << "\n";
}

std::string constraint_list(const json& items) {
  std::string out;
  for (const auto& c : items) out += (out.empty() ? "" : " ") + c["text"].get<std::string>();
  return out.empty() ? "-" : out;
}

void print_search(std::ostream& out, const json& r) {
  out << "query: " << r["parsed"]["canonical"].get<std::string>() << "\n";
  const json& results = r["results"];
  if (results.empty()) {
    out << "no matching images\n";
    return;
  }
  std::size_t rank = 1;
  for (const auto& m : results) {
    out << rank++ << ". " << m["image_id"].get<std::string>() << "  score=" << fixed(m["score"])
        << "  salience=" << fixed(m["mean_salience"]) << "  matched: " << constraint_list(m["satisfied"]);
    if (!m["violated"].empty()) out << "  missed: " << constraint_list(m["violated"]);
    out << "\n";
  }
}

void print_outcome(std::ostream& out, const json& c, bool ok) {
  out << (ok ? "  [ok]   " : "  [fail] ") << c["text"].get<std::string>() << "\n";
  if (!c.contains("evidence")) return;
  const json& ev = c["evidence"];
  if (!ev["rule"].get<std::string>().empty()) out << "         " << ev["rule"].get<std::string>() << "\n";
  if (!ev["detail"].get<std::string>().empty()) out << "         " << ev["detail"].get<std::string>() << "\n";
}

void print_explain(std::ostream& out, const json& r) {
  out << "image " << r["image_id"].get<std::string>() << "  score=" << fixed(r["score"])
      << "  query: " << r["parsed"]["canonical"].get<std::string>() << "\n";
  out << "binding:";
  for (const auto& b : r["binding"]) {
    out << " " << b["label"].get<std::string>() << "#" << b["node_id"].get<int>() << "->"
        << (b["object_id"].is_null() ? std::string("unbound") : std::to_string(b["object_id"].get<int>()));
  }
  out << "\n";
  for (const auto& c : r["satisfied"]) print_outcome(out, c, true);
  for (const auto& c : r["violated"]) print_outcome(out, c, false);
}

void print_anomalies(std::ostream& out, const json& r) {
  std::size_t rank = 1;
  for (const auto& rep : r["reports"]) {
    out << rank++ << ". " << rep["image_id"].get<std::string>()
        << "  uniqueness=" << fixed(rep["uniqueness"]);
    const json& flagged = rep["anomalous_triples"];
    if (!flagged.empty()) {
      out << "  flagged:";
      for (const auto& t : flagged) {
        out << " \"" << t["text"].get<std::string>() << "\" p=" << fixed(t["probability"]);
      }
    }
    out << "\n";
  }
}

EngineConfig config_or_default(const std::string& path) {
  return path.empty() ? EngineConfig{} : load_engine_config(path);
}

}  // namespace

int exit_code(Errc code) noexcept {
  switch (code) {
    case Errc::index_io:
    case Errc::index_corrupt:
    case Errc::version_mismatch:
    case Errc::io_error:
      return kExitIo;
    case Errc::query_parse:
    case Errc::empty_query:
    case Errc::query_too_large:
    case Errc::not_found:
      return kExitQuery;
    default:
      return kExitParse;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"horse: scene-graph image search over object annotations", "horse"};
  app.require_subcommand(1);

  std::string index_dir, config_path, query, image_id, out_path;
  std::vector<std::string> annotation_files;
  std::size_t k = 20;
  std::string mode_text = "ranked";
  bool as_json = false;

  auto* ingest = app.add_subcommand("ingest", "load annotations, fit priors and build an index");
  ingest->add_option("--annotations", annotation_files, "annotation JSON files")->required();
  ingest->add_option("--out", out_path, "index directory")->required();
  ingest->add_option("--config", config_path, "engine config JSON");

  auto* search = app.add_subcommand("search", "rank images for a query");
  search->add_option("--index", index_dir, "index directory")->required();
  search->add_option("query", query, "query text")->required();
  search->add_option("--k", k, "number of results")->check(CLI::PositiveNumber);
  search->add_option("--mode", mode_text, "ranked or strict")->check(CLI::IsMember({"ranked", "strict"}));
  search->add_flag("--json", as_json, "print JSON");
  search->add_option("--config", config_path, "engine config JSON");

  auto* explain = app.add_subcommand("explain", "show per-constraint evidence for one image");
  explain->add_option("--index", index_dir, "index directory")->required();
  explain->add_option("--image", image_id, "image id")->required();
  explain->add_option("query", query, "query text")->required();
  explain->add_flag("--json", as_json, "print JSON");
  explain->add_option("--config", config_path, "engine config JSON");

  std::size_t anomaly_k = 10;
  auto* anomalies = app.add_subcommand("anomalies", "images ranked by uniqueness");
  anomalies->add_option("--index", index_dir, "index directory")->required();
  anomalies->add_option("--k", anomaly_k, "number of reports")->check(CLI::PositiveNumber);
  anomalies->add_flag("--json", as_json, "print JSON");
  anomalies->add_option("--config", config_path, "engine config JSON");

  auto* stats = app.add_subcommand("stats", "corpus and term counts");
  stats->add_option("--index", index_dir, "index directory")->required();

  std::string subject, object;
  bool dump = false;
  auto* priors = app.add_subcommand("priors", "relation priors");
  priors->add_option("--index", index_dir, "index directory")->required();
  priors->add_flag("--dump", dump, "print every counted triple");
  priors->add_option("--subject", subject, "subject label");
  priors->add_option("--object", object, "object label");

  GeneratorSpec gen_spec;
  std::string spec_file;
  std::vector<std::string> labels;
  auto* gen = app.add_subcommand("gen", "write a synthetic annotation file");
  auto* gen_scenes = gen->add_option("--scenes", gen_spec.n_scenes, "number of scenes");
  auto* gen_seed = gen->add_option("--seed", gen_spec.seed, "random seed");
  auto* gen_rate = gen->add_option("--anomaly-rate", gen_spec.anomaly_rate, "fraction of anomalous scenes");
  auto* gen_table = gen->add_option("--table-rate", gen_spec.table_rate, "fraction of scenes with a table");
  auto* gen_labels = gen->add_option("--labels", labels, "label pool")->delimiter(',');
  gen->add_option("--spec", spec_file, "generator spec JSON");
  gen->add_option("--out", out_path, "output annotation file")->required();

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string image_root = ".";
  auto* serve_cmd = app.add_subcommand("serve", "start the HTTP JSON API");
  serve_cmd->add_option("--index", index_dir, "index directory")->required();
  serve_cmd->add_option("--host", host, "listen address");
  serve_cmd->add_option("--port", port, "listen port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--images-root", image_root, "base directory for relative image_uri");
  serve_cmd->add_option("--config", config_path, "engine config JSON");

  bool print_defaults = false;
  auto* config_cmd = app.add_subcommand("config", "engine configuration");
  config_cmd->add_flag("--print-defaults", print_defaults, "print the default configuration");
  std::string check_file;
  config_cmd->add_option("--check", check_file, "validate a config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'horse --help' for usage\n";
    return kExitParse;
  }

  try {
    auto open_engine = [&] { return Engine::open(index_dir, optional_path(config_path)); };
    auto warn = [&](const Engine& e) {
      for (const auto& w : e.warnings()) err << "warning: " << w << "\n";
    };

    if (ingest->parsed()) {
      const EngineConfig cfg = config_or_default(config_path);
      std::vector<fs::path> files(annotation_files.begin(), annotation_files.end());
      const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
      const IngestSummary s = ingest_files(files, out_path, cfg, now);
      for (const auto& w : s.report.warnings) err << "warning: " << w << "\n";
      out << "images=" << s.stats.images << " objects=" << s.stats.objects
          << " triples=" << s.stats.triples << " terms=" << s.stats.terms << "\n";
      if (s.report.objects_dropped > 0 || !s.report.empty_images.empty()) {
        out << "dropped_objects=" << s.report.objects_dropped
            << " empty_images=" << s.report.empty_images.size() << "\n";
      }
      return kExitOk;
    }

    if (search->parsed() || explain->parsed()) {
      const Engine engine = open_engine();
      warn(engine);
      try {
        if (search->parsed()) {
          const json r = engine.search(query, k, *parse_match_mode(mode_text));
          if (as_json) {
            out << r.dump(2) << "\n";
          } else {
            print_search(out, r);
          }
        } else {
          const json r = engine.explain(image_id, query);
          if (as_json) {
            out << r.dump(2) << "\n";
          } else {
            print_explain(out, r);
          }
        }
      } catch (const Error& e) {
        print_query_error(err, e, query);
        return exit_code(e.code());
      }
      return kExitOk;
    }

    if (anomalies->parsed()) {
      const Engine engine = open_engine();
      warn(engine);
      const json r = engine.anomalies(anomaly_k);
      if (as_json) {
        out << r.dump(2) << "\n";
      } else {
        print_anomalies(out, r);
      }
      return kExitOk;
    }

    if (stats->parsed()) {
      const Engine engine = open_engine();
      const json s = engine.stats();
      out << "images=" << s["images"] << " objects=" << s["objects"] << " triples=" << s["triples"]
          << " terms=" << s["terms"] << " postings=" << s["postings"] << "\n";
      return kExitOk;
    }

    if (priors->parsed()) {
      const Engine engine = open_engine();
      if (!subject.empty() || !object.empty()) {
        if (subject.empty() || object.empty()) {
          err << "error: --subject and --object go together\n";
          return kExitParse;
        }
        out << engine.priors(subject, object).dump(2) << "\n";
      } else if (dump) {
        out << engine.priors_dump().dump(2) << "\n";
      } else {
        err << "error: give --dump or --subject/--object\n";
        return kExitParse;
      }
      return kExitOk;
    }

    if (gen->parsed()) {
      GeneratorSpec spec = gen_spec;
      if (!spec_file.empty()) {
        std::ifstream in(spec_file, std::ios::binary);
        if (!in) throw Error(Errc::io_error, "cannot read generator spec " + spec_file);
        std::ostringstream buf;
        buf << in.rdbuf();
        spec = parse_generator_spec(buf.str());
        if (gen_scenes->count()) spec.n_scenes = gen_spec.n_scenes;
        if (gen_seed->count()) spec.seed = gen_spec.seed;
        if (gen_rate->count()) spec.anomaly_rate = gen_spec.anomaly_rate;
        if (gen_table->count()) spec.table_rate = gen_spec.table_rate;
      }
      if (gen_labels->count()) spec.label_pool = labels;
      const auto scenes = generate_synthetic(spec);
      std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
      if (!file) throw Error(Errc::io_error, "cannot write " + out_path);
      file << export_synthetic(scenes);
      if (!file.flush()) throw Error(Errc::io_error, "write failed: " + out_path);
      std::size_t injected = 0;
      for (const auto& s : scenes) injected += s.violation ? 1 : 0;
      out << "scenes=" << scenes.size() << " anomalies=" << injected << " out=" << out_path << "\n";
      return kExitOk;
    }

    if (serve_cmd->parsed()) {
      auto engine = std::make_shared<const Engine>(open_engine());
      warn(*engine);
      const Service service(engine, fs::absolute(image_root));
      out << "listening on http://" << host << ":" << port << "\n" << std::flush;
      serve(service, host, port);
      return kExitOk;
    }

    if (config_cmd->parsed()) {
      if (!check_file.empty()) {
        load_engine_config(check_file);
        out << "ok\n";
        return kExitOk;
      }
      if (!print_defaults) {
        err << "error: give --print-defaults or --check <file>\n";
        return kExitParse;
      }
      out << to_json(EngineConfig{}).dump(2) << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: IoError: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitParse;
}

}  // namespace horse
