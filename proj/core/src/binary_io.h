// Copyright 2026 The LTM Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Little-endian byte buffers and atomic file replacement. Internal.

#ifndef LTM_SRC_BINARY_IO_H_
#define LTM_SRC_BINARY_IO_H_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltm::io {

class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) { put(v, 2); }
  void u32(uint32_t v) { put(v, 4); }
  void u64(uint64_t v) { put(v, 8); }
  void f32(float v) { put(std::bit_cast<uint32_t>(v), 4); }
  void f64(double v) { put(std::bit_cast<uint64_t>(v), 8); }
  void bytes(std::span<const uint8_t> b) {
    buf_.insert(buf_.end(), b.begin(), b.end());
  }
  void tag(std::string_view t) { buf_.insert(buf_.end(), t.begin(), t.end()); }

  std::vector<uint8_t>& buffer() { return buf_; }

 private:
  void put(uint64_t v, int width) {
    for (int i = 0; i < width; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> buf_;
};

// Thrown when a read runs past the end of the buffer.
class TruncatedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t u8() { return static_cast<uint8_t>(get(1)); }
  uint16_t u16() { return static_cast<uint16_t>(get(2)); }
  uint32_t u32() { return static_cast<uint32_t>(get(4)); }
  uint64_t u64() { return get(8); }
  float f32() { return std::bit_cast<float>(static_cast<uint32_t>(get(4))); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::span<const uint8_t> bytes(size_t count) {
    need(count);
    auto out = data_.subspan(pos_, count);
    pos_ += count;
    return out;
  }
  bool tag(std::string_view t) {
    auto b = bytes(t.size());
    return std::equal(t.begin(), t.end(), b.begin(),
                      [](char c, uint8_t x) { return static_cast<uint8_t>(c) == x; });
  }
  size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(size_t count) const {
    if (count > remaining()) throw TruncatedError("unexpected end of data");
  }
  uint64_t get(int width) {
    need(static_cast<size_t>(width));
    uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
    }
    pos_ += static_cast<size_t>(width);
    return v;
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const uint8_t> data);
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view text);
// Throws std::runtime_error if the file cannot be read.
std::vector<uint8_t> read_file(const std::filesystem::path& path);

}  // namespace ltm::io

#endif  // LTM_SRC_BINARY_IO_H_
