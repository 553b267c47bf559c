// Copyright 2026 The landmark-hrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hrl::io {

/// Raised on any malformed, truncated, or version-incompatible binary input.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Append-only little-endian binary buffer.
class Writer {
 public:
  void write_u8(uint8_t v);
  void write_u32(uint32_t v);
  void write_u64(uint64_t v);
  void write_i64(int64_t v);
  void write_f64(double v);
  void write_bytes(const void* data, std::size_t n);
  void write_string(const std::string& s);  // u32 length + raw bytes
  void write_vector(const Eigen::VectorXd& v);
  void write_matrix(const Eigen::MatrixXd& m);  // rows, cols, row-major doubles

  const std::string& buffer() const { return buf_; }
  void save_file(const std::string& path) const;

 private:
  std::string buf_;
};

/// Little-endian binary reader over an owned buffer. Throws FormatError on
/// truncation so a failed load never yields partially valid objects.
class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}
  static Reader from_file(const std::string& path);

  uint8_t read_u8();
  uint32_t read_u32();
  uint64_t read_u64();
  int64_t read_i64();
  double read_f64();
  std::string read_string();
  std::string read_raw(std::size_t n);
  Eigen::VectorXd read_vector();
  Eigen::MatrixXd read_matrix();

  std::size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const;
  std::string data_;
  std::size_t pos_ = 0;
};

/// Length-prefixed named sections inside a magic-tagged container.
void write_container_header(Writer& w, const char magic[8], uint32_t version);
uint32_t read_container_header(Reader& r, const char magic[8],
                               uint32_t max_version);
void write_section(Writer& w, const std::string& name, const Writer& payload);

class SectionMap {
 public:
  static SectionMap parse(Reader& r);
  bool has(const std::string& name) const;
  /// Payload of a named section; throws FormatError when absent.
  const std::string& get(const std::string& name) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace hrl::io
