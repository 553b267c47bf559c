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
#include <string>
#include <vector>

#include "hrl/binio.hpp"

namespace hrl {

/// One evaluation snapshot. Wall-clock time is tracked for logging but kept
/// out of the CSV so identical seeded runs produce byte-identical files.
struct MetricsRecord {
  int64_t step = 0;
  int64_t episode = 0;
  double eval_success_rate = 0.0;
  double mean_episode_return = 0.0;
  double high_critic_loss = 0.0;
  double high_actor_loss = 0.0;
  double low_critic_loss = 0.0;
  double low_actor_loss = 0.0;
  double landmark_loss_mean = 0.0;
  double rnd_loss = 0.0;
  int64_t queue_size = 0;
  int64_t landmarks_cov = 0;
  int64_t landmarks_nov = 0;
  double wall_clock_seconds = 0.0;  // not serialized into the CSV
};

/// Fixed CSV header, floats rendered with 6 significant digits.
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsRecord& rec);

void save_metrics_record(io::Writer& w, const MetricsRecord& rec);
MetricsRecord load_metrics_record(io::Reader& r);

}  // namespace hrl
