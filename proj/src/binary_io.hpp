// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

// Little-endian segment encoding shared by the index writer and reader.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "horse/error.hpp"

namespace horse::detail {

inline constexpr char kSegmentMagic[4] = {'H', 'R', 'S', 'G'};

enum class SegmentKind : std::uint32_t { terms = 1, postings = 2, docs = 3, priors = 4 };

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept;

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }

  std::size_t size() const noexcept { return buf_.size(); }
  const std::vector<std::uint8_t>& data() const noexcept { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> buf_;
};

/// Bounds-checked reader; every overrun raises Error(index_corrupt) naming
/// the segment.
class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, std::string segment)
      : bytes_(bytes), segment_(std::move(segment)) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  /// Element count that must be backed by at least `min_bytes_each` bytes per
  /// element, so corrupt counts cannot trigger huge allocations.
  std::uint32_t count(std::size_t min_bytes_each) {
    const std::uint32_t n = u32();
    if (min_bytes_each > 0 && n > remaining() / min_bytes_each) corrupt("implausible element count");
    return n;
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  bool done() const noexcept { return pos_ == bytes_.size(); }

  [[noreturn]] void corrupt(const std::string& what) const {
    throw Error(Errc::index_corrupt, "segment " + segment_ + ": " + what);
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) corrupt("truncated");
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::string segment_;
  std::size_t pos_ = 0;
};

/// magic, format version, kind, payload length, payload, fnv1a64(payload).
std::vector<std::uint8_t> wrap_segment(SegmentKind kind, std::span<const std::uint8_t> payload);

/// Validates the envelope and returns the payload view into `file`.
std::span<const std::uint8_t> unwrap_segment(std::span<const std::uint8_t> file, SegmentKind kind,
                                             const std::string& name);

}  // namespace horse::detail
