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

#include "hrl/metrics.hpp"

#include <cstdio>
#include <sstream>

namespace hrl {

namespace {
std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
}  // namespace

std::string metrics_csv_header() {
  return "step,episode,eval_success_rate,mean_episode_return,"
         "high_critic_loss,high_actor_loss,low_critic_loss,low_actor_loss,"
         "landmark_loss_mean,rnd_loss,queue_size,landmarks_cov,landmarks_nov";
}

std::string metrics_csv_row(const MetricsRecord& rec) {
  std::ostringstream os;
  os << rec.step << ',' << rec.episode << ',' << fmt6(rec.eval_success_rate)
     << ',' << fmt6(rec.mean_episode_return) << ','
     << fmt6(rec.high_critic_loss) << ',' << fmt6(rec.high_actor_loss) << ','
     << fmt6(rec.low_critic_loss) << ',' << fmt6(rec.low_actor_loss) << ','
     << fmt6(rec.landmark_loss_mean) << ',' << fmt6(rec.rnd_loss) << ','
     << rec.queue_size << ',' << rec.landmarks_cov << ',' << rec.landmarks_nov;
  return os.str();
}

void save_metrics_record(io::Writer& w, const MetricsRecord& rec) {
  w.write_i64(rec.step);
  w.write_i64(rec.episode);
  w.write_f64(rec.eval_success_rate);
  w.write_f64(rec.mean_episode_return);
  w.write_f64(rec.high_critic_loss);
  w.write_f64(rec.high_actor_loss);
  w.write_f64(rec.low_critic_loss);
  w.write_f64(rec.low_actor_loss);
  w.write_f64(rec.landmark_loss_mean);
  w.write_f64(rec.rnd_loss);
  w.write_i64(rec.queue_size);
  w.write_i64(rec.landmarks_cov);
  w.write_i64(rec.landmarks_nov);
}

MetricsRecord load_metrics_record(io::Reader& r) {
  MetricsRecord rec;
  rec.step = r.read_i64();
  rec.episode = r.read_i64();
  rec.eval_success_rate = r.read_f64();
  rec.mean_episode_return = r.read_f64();
  rec.high_critic_loss = r.read_f64();
  rec.high_actor_loss = r.read_f64();
  rec.low_critic_loss = r.read_f64();
  rec.low_actor_loss = r.read_f64();
  rec.landmark_loss_mean = r.read_f64();
  rec.rnd_loss = r.read_f64();
  rec.queue_size = r.read_i64();
  rec.landmarks_cov = r.read_i64();
  rec.landmarks_nov = r.read_i64();
  return rec;
}

}  // namespace hrl
