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

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>

#include "hrl/binio.hpp"

namespace hrl {

uint64_t splitmix64(uint64_t& state);

/// Seed for a named sub-stream of a master seed; distinct names give
/// statistically independent streams.
uint64_t derive_seed(uint64_t master, std::string_view name);

/// mt19937_64 wrapper with stateless distribution helpers. Sampling draws a
/// fixed number of engine words per call, so saved engine state alone fully
/// determines the future sequence (std:: distributions cache internal state,
/// which would break bit-exact checkpoint resume).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }
  /// Uniform double in [0, 1), 53-bit resolution. One engine word.
  double uniform();
  /// Uniform double in [lo, hi). One engine word.
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n). One engine word; requires n > 0.
  int64_t uniform_int(int64_t n);
  /// Standard normal via Box-Muller. Two engine words.
  double normal();
  double normal(double mean, double stddev);

  void save(io::Writer& w) const;
  void load(io::Reader& r);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Named RNG streams derived from one master seed. Each consumer pulls its
/// own stream so adding or removing a component never perturbs the draws
/// seen by unrelated components.
class RngHub {
 public:
  explicit RngHub(uint64_t master_seed) : master_(master_seed) {}

  Rng& stream(const std::string& name);
  uint64_t master_seed() const { return master_; }

  void save(io::Writer& w) const;
  void load(io::Reader& r);

 private:
  uint64_t master_;
  std::map<std::string, Rng> streams_;
};

}  // namespace hrl
