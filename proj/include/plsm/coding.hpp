#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "plsm/error.hpp"

// Fixed-width little-endian and LEB128 varint helpers shared by the table
// format, the payload format and the manifest.
namespace plsm::coding {

inline void put_fixed8(std::string& dst, uint8_t v) { dst.push_back(static_cast<char>(v)); }

inline void put_fixed16(std::string& dst, uint16_t v) {
  char buf[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  dst.append(buf, 2);
}

inline void put_fixed32(std::string& dst, uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  dst.append(buf, 4);
}

inline void put_fixed64(std::string& dst, uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  dst.append(buf, 8);
}

inline uint16_t decode_fixed16(const char* p) {
  auto u = reinterpret_cast<const unsigned char*>(p);
  return static_cast<uint16_t>(u[0] | (u[1] << 8));
}

inline uint32_t decode_fixed32(const char* p) {
  auto u = reinterpret_cast<const unsigned char*>(p);
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | u[i];
  return v;
}

inline uint64_t decode_fixed64(const char* p) {
  auto u = reinterpret_cast<const unsigned char*>(p);
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | u[i];
  return v;
}

inline void put_varint64(std::string& dst, uint64_t v) {
  while (v >= 0x80) {
    dst.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  dst.push_back(static_cast<char>(v));
}

inline size_t varint_length(uint64_t v) {
  size_t len = 1;
  while (v >= 0x80) {
    v >>= 7;
    ++len;
  }
  return len;
}

// Sequential reader over a byte range; every accessor bounds-checks and
// throws Corruption on truncated input.
class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  bool empty() const { return pos_ >= data_.size(); }
  size_t remaining() const { return data_.size() - pos_; }
  size_t position() const { return pos_; }

  uint8_t fixed8() {
    need(1);
    return static_cast<uint8_t>(data_[pos_++]);
  }
  uint16_t fixed16() {
    need(2);
    auto v = decode_fixed16(data_.data() + pos_);
    pos_ += 2;
    return v;
  }
  uint32_t fixed32() {
    need(4);
    auto v = decode_fixed32(data_.data() + pos_);
    pos_ += 4;
    return v;
  }
  uint64_t fixed64() {
    need(8);
    auto v = decode_fixed64(data_.data() + pos_);
    pos_ += 8;
    return v;
  }
  uint64_t varint64() {
    uint64_t result = 0;
    for (int shift = 0; shift <= 63; shift += 7) {
      need(1);
      auto byte = static_cast<uint8_t>(data_[pos_++]);
      if (shift == 63 && byte > 1) throw_corruption("varint overflow");
      result |= static_cast<uint64_t>(byte & 0x7f) << shift;
      if ((byte & 0x80) == 0) return result;
    }
    throw_corruption("varint too long");
  }
  std::string_view bytes(size_t n) {
    need(n);
    auto v = data_.substr(pos_, n);
    pos_ += n;
    return v;
  }

 private:
  void need(size_t n) const {
    if (n > data_.size() - pos_) throw_corruption("truncated input");
  }

  std::string_view data_;
  size_t pos_ = 0;
};

}  // namespace plsm::coding
