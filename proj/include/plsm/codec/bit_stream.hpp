#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "plsm/error.hpp"

namespace plsm::codec {

// Bit i of the stream is bit (i % 8) of byte (i / 8): LSB-first packing.
class BitWriter {
 public:
  void write(uint64_t value, unsigned width) {
    if (width == 0) return;
    if (width < 64) value &= (uint64_t{1} << width) - 1;
    const size_t word = bits_ / 64;
    const unsigned offset = bits_ % 64;
    if (word >= words_.size()) words_.push_back(0);
    words_[word] |= value << offset;
    if (offset + width > 64) words_.push_back(value >> (64 - offset));
    bits_ += width;
  }

  void write_bit(bool bit) { write(bit ? 1 : 0, 1); }

  // Appends `count` zero bits.
  void skip(size_t count) {
    bits_ += count;
    words_.resize((bits_ + 63) / 64, 0);
  }

  size_t size_bits() const { return bits_; }

  void append_to(std::string& dst) const {
    const size_t nbytes = (bits_ + 7) / 8;
    for (size_t i = 0; i < nbytes; ++i) {
      dst.push_back(static_cast<char>((words_[i / 8] >> (8 * (i % 8))) & 0xff));
    }
  }

 private:
  std::vector<uint64_t> words_;
  size_t bits_ = 0;
};

class BitReader {
 public:
  BitReader(std::string_view bytes, size_t bit_offset, size_t bit_limit)
      : bytes_(bytes), pos_(bit_offset), limit_(bit_limit) {
    if (limit_ > bytes_.size() * 8) throw_corruption("bit limit beyond buffer");
  }

  size_t position() const { return pos_; }
  size_t remaining() const { return limit_ - pos_; }

  uint64_t read(unsigned width) {
    if (width == 0) return 0;
    if (width > remaining()) throw_corruption("bit stream truncated");
    uint64_t value = 0;
    unsigned done = 0;
    while (done < width) {
      const size_t byte = pos_ / 8;
      const unsigned offset = pos_ % 8;
      const unsigned take = std::min<unsigned>(8 - offset, width - done);
      const uint64_t chunk =
          (static_cast<uint8_t>(bytes_[byte]) >> offset) & ((1u << take) - 1);
      value |= chunk << done;
      done += take;
      pos_ += take;
    }
    return value;
  }

  // Advances past zeros to the next set bit, consuming it. Returns the number
  // of zeros skipped.
  size_t read_unary() {
    size_t zeros = 0;
    while (pos_ < limit_) {
      if (pos_ % 8 == 0 && limit_ - pos_ >= 8 && bytes_[pos_ / 8] == 0) {
        pos_ += 8;
        zeros += 8;
        continue;
      }
      const bool bit = (static_cast<uint8_t>(bytes_[pos_ / 8]) >> (pos_ % 8)) & 1;
      ++pos_;
      if (bit) return zeros;
      ++zeros;
    }
    throw_corruption("unterminated unary code");
  }

  void seek(size_t bit_position) {
    if (bit_position > limit_) throw_corruption("seek beyond bit stream");
    pos_ = bit_position;
  }

 private:
  std::string_view bytes_;
  size_t pos_;
  size_t limit_;
};

}  // namespace plsm::codec
