// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <fstream>
#include <system_error>

#include "binary_io.hpp"
#include "horse/error.hpp"
#include "horse/index.hpp"

namespace horse {

namespace fs = std::filesystem;
using nlohmann::json;

namespace detail {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::uint8_t> wrap_segment(SegmentKind kind, std::span<const std::uint8_t> payload) {
  ByteWriter w;
  for (char c : kSegmentMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kIndexFormatVersion);
  w.u32(static_cast<std::uint32_t>(kind));
  w.u64(payload.size());
  w.bytes(payload);
  w.u64(fnv1a64(payload));
  return w.take();
}

std::span<const std::uint8_t> unwrap_segment(std::span<const std::uint8_t> file, SegmentKind kind,
                                             const std::string& name) {
  ByteReader r(file, name);
  auto magic = r.take(4);
  if (!std::equal(magic.begin(), magic.end(), std::begin(kSegmentMagic),
                  [](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); })) {
    r.corrupt("bad magic");
  }
  if (const auto version = r.u32(); version != kIndexFormatVersion) {
    throw Error(Errc::version_mismatch, "segment " + name + ": format version " +
                                            std::to_string(version) + ", expected " +
                                            std::to_string(kIndexFormatVersion));
  }
  if (r.u32() != static_cast<std::uint32_t>(kind)) r.corrupt("unexpected segment kind");
  const std::uint64_t len = r.u64();
  if (len > r.remaining()) r.corrupt("truncated payload");
  auto payload = r.take(static_cast<std::size_t>(len));
  if (r.u64() != fnv1a64(payload)) r.corrupt("checksum mismatch");
  if (!r.done()) r.corrupt("trailing bytes");
  return payload;
}

}  // namespace detail

namespace {

using detail::ByteReader;
using detail::ByteWriter;
using detail::SegmentKind;

constexpr const char* kManifest = "manifest.json";
constexpr const char* kTermsSeg = "terms.seg";
constexpr const char* kPostingsSeg = "postings.seg";
constexpr const char* kDocsSeg = "docs.seg";
constexpr const char* kPriorsSeg = "priors.seg";

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::index_io, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::index_io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(Errc::index_io, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::index_io, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> encode_priors(const RelationPriors& p) {
  ByteWriter w;
  w.f64(p.alpha);
  w.u32(static_cast<std::uint32_t>(p.predicate_count));
  w.u32(static_cast<std::uint32_t>(p.pair_totals.size()));
  for (const auto& [pair, total] : p.pair_totals) {
    w.str(pair.first);
    w.str(pair.second);
    w.u64(total);
  }
  w.u32(static_cast<std::uint32_t>(p.counts.size()));
  for (const auto& [key, count] : p.counts) {
    w.str(std::get<0>(key));
    w.u8(static_cast<std::uint8_t>(std::get<1>(key)));
    w.str(std::get<2>(key));
    w.u64(count);
  }
  return w.take();
}

Predicate read_predicate(ByteReader& r) {
  const std::uint8_t raw = r.u8();
  if (raw >= kPredicateCount) r.corrupt("predicate out of range");
  return static_cast<Predicate>(raw);
}

RelationPriors decode_priors(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, kPriorsSeg);
  RelationPriors p;
  p.alpha = r.f64();
  p.predicate_count = r.u32();
  for (std::uint32_t n = r.count(16); n > 0; --n) {
    std::string a = r.str();
    std::string b = r.str();
    p.pair_totals[{std::move(a), std::move(b)}] = r.u64();
  }
  for (std::uint32_t n = r.count(17); n > 0; --n) {
    std::string s = r.str();
    Predicate pred = read_predicate(r);
    std::string o = r.str();
    p.counts[{std::move(s), pred, std::move(o)}] = r.u64();
  }
  if (!r.done()) r.corrupt("trailing bytes");
  return p;
}

void encode_strings(ByteWriter& w, const std::vector<std::string>& v) {
  w.u32(static_cast<std::uint32_t>(v.size()));
  for (const auto& s : v) w.str(s);
}

std::vector<std::string> decode_strings(ByteReader& r) {
  std::vector<std::string> v(r.count(4));
  for (auto& s : v) s = r.str();
  return v;
}

std::vector<std::uint8_t> encode_docs(const std::vector<SceneGraph>& docs) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(docs.size()));
  for (const SceneGraph& g : docs) {
    w.str(g.image_id);
    w.u8(g.image_uri ? 1 : 0);
    w.str(g.image_uri.value_or(""));
    w.i64(g.built_at);
    w.u32(static_cast<std::uint32_t>(g.objects.size()));
    for (const SceneObject& o : g.objects) {
      w.i32(o.id);
      w.str(o.label);
      w.f64(o.bbox.x_min);
      w.f64(o.bbox.y_min);
      w.f64(o.bbox.x_max);
      w.f64(o.bbox.y_max);
      w.u8(o.depth ? 1 : 0);
      w.f64(o.depth.value_or(0.0));
      encode_strings(w, o.colors);
      w.u8(o.shape ? 1 : 0);
      w.str(o.shape.value_or(""));
      w.f64(o.confidence);
      encode_strings(w, o.attributes);
      w.f64(o.area);
      w.i32(o.size_rank);
      w.f64(o.salience);
    }
    w.u32(static_cast<std::uint32_t>(g.relations.size()));
    for (const RelationTriple& t : g.relations) {
      w.i32(t.subject_id);
      w.u8(static_cast<std::uint8_t>(t.predicate));
      w.i32(t.object_id);
    }
  }
  return w.take();
}

std::vector<SceneGraph> decode_docs(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, kDocsSeg);
  std::vector<SceneGraph> docs(r.count(25));
  for (SceneGraph& g : docs) {
    g.image_id = r.str();
    const bool has_uri = r.u8() != 0;
    std::string uri = r.str();
    if (has_uri) g.image_uri = std::move(uri);
    g.built_at = r.i64();
    g.objects.resize(r.count(80));
    for (SceneObject& o : g.objects) {
      o.id = r.i32();
      o.label = r.str();
      o.bbox = {r.f64(), r.f64(), r.f64(), r.f64()};
      const bool has_depth = r.u8() != 0;
      const double depth = r.f64();
      if (has_depth) o.depth = depth;
      o.colors = decode_strings(r);
      const bool has_shape = r.u8() != 0;
      std::string shape = r.str();
      if (has_shape) o.shape = std::move(shape);
      o.confidence = r.f64();
      o.attributes = decode_strings(r);
      o.area = r.f64();
      o.size_rank = r.i32();
      o.salience = r.f64();
    }
    g.relations.resize(r.count(9));
    for (RelationTriple& t : g.relations) {
      t.subject_id = r.i32();
      t.predicate = read_predicate(r);
      t.object_id = r.i32();
      if (!g.find_object(t.subject_id) || !g.find_object(t.object_id)) {
        r.corrupt("relation references a missing object in '" + g.image_id + "'");
      }
    }
  }
  if (!r.done()) r.corrupt("trailing bytes");
  return docs;
}

json segment_entry(const std::vector<std::uint8_t>& file) {
  return {{"bytes", file.size()}, {"fnv1a64", detail::fnv1a64(file)}};
}

}  // namespace

void Index::save(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(Errc::index_io, "cannot create index directory " + dir.string() +
                                    (ec ? ": " + ec.message() : ""));
  }

  // postings.seg is a flat run of (doc, object ids) records; terms.seg maps
  // each term to its offset and record count in that run.
  ByteWriter postings;
  ByteWriter terms;
  terms.u32(static_cast<std::uint32_t>(dictionary_.size()));
  for (const auto& [term, entries] : dictionary_) {
    terms.str(term);
    terms.u64(postings.size());
    terms.u32(static_cast<std::uint32_t>(entries.size()));
    for (const Entry& e : entries) {
      postings.u32(e.doc);
      postings.u32(static_cast<std::uint32_t>(e.object_ids.size()));
      for (int id : e.object_ids) postings.i32(id);
    }
  }

  const auto terms_file = detail::wrap_segment(SegmentKind::terms, terms.data());
  const auto postings_file = detail::wrap_segment(SegmentKind::postings, postings.data());
  const auto docs_file = detail::wrap_segment(SegmentKind::docs, encode_docs(docs_));
  const auto priors_file = detail::wrap_segment(SegmentKind::priors, encode_priors(priors_));

  write_file(dir / kTermsSeg, terms_file);
  write_file(dir / kPostingsSeg, postings_file);
  write_file(dir / kDocsSeg, docs_file);
  write_file(dir / kPriorsSeg, priors_file);

  const IndexStats s = stats();
  json manifest = {
      {"format", "horse-index"},
      {"version", kIndexFormatVersion},
      {"counts",
       {{"images", s.images},
        {"objects", s.objects},
        {"triples", s.triples},
        {"terms", s.terms},
        {"postings", s.postings}}},
      {"config", config_},
      {"segments",
       {{kTermsSeg, segment_entry(terms_file)},
        {kPostingsSeg, segment_entry(postings_file)},
        {kDocsSeg, segment_entry(docs_file)},
        {kPriorsSeg, segment_entry(priors_file)}}},
      {"written_at", std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count()},
  };
  const std::string text = manifest.dump(2) + "\n";
  write_file(dir / kManifest,
             std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Index Index::open(const fs::path& dir) {
  const auto manifest_bytes = read_file(dir / kManifest);
  json manifest;
  try {
    manifest = json::parse(manifest_bytes.begin(), manifest_bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::index_corrupt, std::string("segment manifest.json: ") + e.what());
  }
  if (!manifest.is_object() || manifest.value("format", "") != "horse-index") {
    throw Error(Errc::index_corrupt, "segment manifest.json: not a horse index manifest");
  }
  if (!manifest.contains("version") || !manifest["version"].is_number_unsigned() ||
      manifest["version"].get<std::uint32_t>() != kIndexFormatVersion) {
    throw Error(Errc::version_mismatch, "index format version " + manifest.value("version", json()).dump() +
                                            ", expected " + std::to_string(kIndexFormatVersion));
  }

  auto load = [&](const char* name, SegmentKind kind) {
    auto file = read_file(dir / name);
    const json& seg = manifest["segments"][name];
    if (!seg.is_object() || seg.value("bytes", std::size_t{0}) != file.size() ||
        seg.value("fnv1a64", std::uint64_t{0}) != detail::fnv1a64(file)) {
      throw Error(Errc::index_corrupt, std::string("segment ") + name + ": does not match manifest");
    }
    detail::unwrap_segment(file, kind, name);
    return file;
  };
  const auto terms_file = load(kTermsSeg, SegmentKind::terms);
  const auto postings_file = load(kPostingsSeg, SegmentKind::postings);
  const auto docs_file = load(kDocsSeg, SegmentKind::docs);
  const auto priors_file = load(kPriorsSeg, SegmentKind::priors);

  Index index;
  index.config_ = manifest.value("config", json::object());
  index.docs_ = decode_docs(detail::unwrap_segment(docs_file, SegmentKind::docs, kDocsSeg));
  for (std::size_t i = 1; i < index.docs_.size(); ++i) {
    if (!(index.docs_[i - 1].image_id < index.docs_[i].image_id)) {
      throw Error(Errc::index_corrupt, "segment docs.seg: documents out of order");
    }
  }
  index.priors_ = decode_priors(detail::unwrap_segment(priors_file, SegmentKind::priors, kPriorsSeg));

  const auto postings = detail::unwrap_segment(postings_file, SegmentKind::postings, kPostingsSeg);
  ByteReader tr(detail::unwrap_segment(terms_file, SegmentKind::terms, kTermsSeg), kTermsSeg);
  std::string previous;
  for (std::uint32_t n = tr.count(16); n > 0; --n) {
    std::string term = tr.str();
    if (!index.dictionary_.empty() && !(previous < term)) tr.corrupt("dictionary not sorted");
    const std::uint64_t offset = tr.u64();
    const std::uint32_t count = tr.u32();
    if (offset > postings.size()) tr.corrupt("posting offset out of range");
    ByteReader pr(postings.subspan(static_cast<std::size_t>(offset)), kPostingsSeg);
    std::vector<Entry> entries(count);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      Entry& e = entries[k];
      e.doc = pr.u32();
      if (e.doc >= index.docs_.size()) pr.corrupt("posting references unknown document");
      if (k > 0 && e.doc <= entries[k - 1].doc) pr.corrupt("postings not sorted");
      e.object_ids.resize(pr.count(4));
      for (int& id : e.object_ids) id = pr.i32();
    }
    previous = term;
    index.dictionary_.emplace(std::move(term), std::move(entries));
  }
  if (!tr.done()) tr.corrupt("trailing bytes");
  return index;
}

}  // namespace horse
