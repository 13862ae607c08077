// Copyright 2026 The EmoTTS Authors
//
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

#include "emotts/eval/metrics.h"

#include <cmath>

#include "emotts/errors.h"

namespace emotts::eval {

RmseResult rmse_waveforms(const Waveform& a, const Waveform& b) {
  if (a.sample_rate != b.sample_rate) {
    throw RateMismatch("cannot compare waveforms at " + std::to_string(a.sample_rate) +
                       " Hz and " + std::to_string(b.sample_rate) + " Hz");
  }
  RmseResult r;
  const Eigen::Index n = std::max(a.samples.size(), b.samples.size());
  r.padded = a.samples.size() != b.samples.size();
  if (n == 0) return r;
  Eigen::VectorXd pa = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd pb = Eigen::VectorXd::Zero(n);
  pa.head(a.samples.size()) = a.samples;
  pb.head(b.samples.size()) = b.samples;
  r.rmse = std::sqrt((pa - pb).squaredNorm() / static_cast<double>(n));
  return r;
}

}  // namespace emotts::eval
