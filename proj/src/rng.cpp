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

#include "hrl/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hrl {

uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {
uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}
}  // namespace

uint64_t derive_seed(uint64_t master, std::string_view name) {
  uint64_t x = master ^ fnv1a64(name);
  splitmix64(x);
  return splitmix64(x);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + uniform() * (hi - lo);
}

int64_t Rng::uniform_int(int64_t n) {
  if (n <= 0) throw std::invalid_argument("uniform_int requires n > 0");
  return static_cast<int64_t>(next_u64() % static_cast<uint64_t>(n));
}

double Rng::normal() {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::normal(double mean, double stddev) {
  return mean + stddev * normal();
}

void Rng::save(io::Writer& w) const {
  std::ostringstream os;
  os << engine_;
  w.write_string(os.str());
}

void Rng::load(io::Reader& r) {
  std::istringstream is(r.read_string());
  is >> engine_;
  if (!is) throw io::FormatError("bad rng engine state");
}

Rng& RngHub::stream(const std::string& name) {
  auto it = streams_.find(name);
  if (it == streams_.end()) {
    it = streams_.emplace(name, Rng(derive_seed(master_, name))).first;
  }
  return it->second;
}

void RngHub::save(io::Writer& w) const {
  w.write_u64(master_);
  w.write_u32(static_cast<uint32_t>(streams_.size()));
  for (const auto& [name, rng] : streams_) {
    w.write_string(name);
    rng.save(w);
  }
}

void RngHub::load(io::Reader& r) {
  master_ = r.read_u64();
  uint32_t n = r.read_u32();
  streams_.clear();
  for (uint32_t i = 0; i < n; ++i) {
    std::string name = r.read_string();
    Rng rng(0);
    rng.load(r);
    streams_.emplace(std::move(name), rng);
  }
}

}  // namespace hrl
