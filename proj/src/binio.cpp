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

#include "hrl/binio.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace hrl::io {

void Writer::write_u8(uint8_t v) { buf_.push_back(static_cast<char>(v)); }

void Writer::write_u32(uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

void Writer::write_u64(uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

void Writer::write_i64(int64_t v) { write_u64(static_cast<uint64_t>(v)); }

void Writer::write_f64(double v) { write_u64(std::bit_cast<uint64_t>(v)); }

void Writer::write_bytes(const void* data, std::size_t n) {
  buf_.append(static_cast<const char*>(data), n);
}

void Writer::write_string(const std::string& s) {
  write_u32(static_cast<uint32_t>(s.size()));
  buf_.append(s);
}

void Writer::write_vector(const Eigen::VectorXd& v) {
  write_u64(static_cast<uint64_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) write_f64(v[i]);
}

void Writer::write_matrix(const Eigen::MatrixXd& m) {
  write_u64(static_cast<uint64_t>(m.rows()));
  write_u64(static_cast<uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) write_f64(m(r, c));
  }
}

void Writer::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open file for writing: " + path);
  out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
  if (!out) throw FormatError("write failed: " + path);
}

Reader Reader::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return Reader(std::move(data));
}

void Reader::need(std::size_t n) const {
  if (pos_ + n > data_.size()) throw FormatError("truncated binary input");
}

uint8_t Reader::read_u8() {
  need(1);
  return static_cast<uint8_t>(data_[pos_++]);
}

uint32_t Reader::read_u32() {
  need(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(static_cast<uint8_t>(data_[pos_ + i])) << (8 * i);
  }
  pos_ += 4;
  return v;
}

uint64_t Reader::read_u64() {
  need(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<uint64_t>(static_cast<uint8_t>(data_[pos_ + i])) << (8 * i);
  }
  pos_ += 8;
  return v;
}

int64_t Reader::read_i64() { return static_cast<int64_t>(read_u64()); }

double Reader::read_f64() { return std::bit_cast<double>(read_u64()); }

std::string Reader::read_string() {
  uint32_t n = read_u32();
  return read_raw(n);
}

std::string Reader::read_raw(std::size_t n) {
  need(n);
  std::string s = data_.substr(pos_, n);
  pos_ += n;
  return s;
}

Eigen::VectorXd Reader::read_vector() {
  uint64_t n = read_u64();
  if (n > remaining() / 8) throw FormatError("vector length exceeds input");
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (uint64_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = read_f64();
  return v;
}

Eigen::MatrixXd Reader::read_matrix() {
  uint64_t rows = read_u64();
  uint64_t cols = read_u64();
  if (rows != 0 && cols > remaining() / 8 / rows) {
    throw FormatError("matrix size exceeds input");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  for (uint64_t r = 0; r < rows; ++r) {
    for (uint64_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read_f64();
    }
  }
  return m;
}

void write_container_header(Writer& w, const char magic[8], uint32_t version) {
  w.write_bytes(magic, 8);
  w.write_u32(version);
}

uint32_t read_container_header(Reader& r, const char magic[8],
                               uint32_t max_version) {
  char got[8];
  for (int i = 0; i < 8; ++i) got[i] = static_cast<char>(r.read_u8());
  if (std::memcmp(got, magic, 8) != 0) {
    throw FormatError("bad magic bytes");
  }
  uint32_t version = r.read_u32();
  if (version == 0 || version > max_version) {
    throw FormatError("unsupported format version " + std::to_string(version));
  }
  return version;
}

void write_section(Writer& w, const std::string& name, const Writer& payload) {
  w.write_string(name);
  w.write_u64(payload.buffer().size());
  w.write_bytes(payload.buffer().data(), payload.buffer().size());
}

SectionMap SectionMap::parse(Reader& r) {
  SectionMap map;
  while (!r.at_end()) {
    std::string name = r.read_string();
    uint64_t len = r.read_u64();
    if (len > r.remaining()) throw FormatError("truncated section: " + name);
    map.entries_.emplace_back(std::move(name), r.read_raw(len));
  }
  return map;
}

bool SectionMap::has(const std::string& name) const {
  for (const auto& [n, p] : entries_) {
    if (n == name) return true;
  }
  return false;
}

const std::string& SectionMap::get(const std::string& name) const {
  for (const auto& [n, p] : entries_) {
    if (n == name) return p;
  }
  throw FormatError("missing section: " + name);
}

}  // namespace hrl::io
