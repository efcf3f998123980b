#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fdia {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }
inline std::string to_string(ByteView b) { return std::string(b.begin(), b.end()); }

// Malformed or non-canonical serialized input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Big-endian writer for the wire and file formats.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void raw(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
  // u32 length prefix followed by the bytes
  void blob(ByteView b) {
    u32(static_cast<std::uint32_t>(b.size()));
    raw(b);
  }

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }
  std::size_t size() const { return out_.size(); }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(ByteView in) : in_(in) {}

  ByteView take(std::size_t n) {
    if (n > remaining()) throw FormatError("truncated input");
    ByteView out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() {
    auto b = take(2);
    return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
  }
  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (auto c : b) v = (v << 8) | c;
    return v;
  }
  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (auto c : b) v = (v << 8) | c;
    return v;
  }
  Bytes blob(std::size_t max_len = 1U << 20) {
    std::uint32_t n = u32();
    if (n > max_len) throw FormatError("length prefix too large");
    auto b = take(n);
    return Bytes(b.begin(), b.end());
  }
  void expect(std::string_view magic) {
    auto b = take(magic.size());
    if (std::string_view(reinterpret_cast<const char*>(b.data()), b.size()) != magic) {
      throw FormatError("bad magic, expected " + std::string(magic));
    }
  }

  std::size_t remaining() const { return in_.size() - pos_; }
  void finish() const {
    if (remaining() != 0) throw FormatError("trailing bytes");
  }

 private:
  ByteView in_;
  std::size_t pos_ = 0;
};

}  // namespace fdia
