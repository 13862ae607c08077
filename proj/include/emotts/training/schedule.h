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

#pragma once

#include <vector>

#include <json.hpp>

namespace emotts::training {

struct OptimizerConfig {
  int batch_size = 16;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-9;
  double weight_decay = 0.0;
  double grad_clip = 1.0;
  int accumulation = 1;
  int warmup = 4000;
  std::vector<long> anneal_steps = {300000, 400000, 500000};
  double anneal_rate = 0.3;
  // Overall learning-rate multiplier; the only free knob of the schedule.
  double base_scale = 1.0;

  void validate() const;  // throws ConfigError
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OptimizerConfig, batch_size, beta1, beta2, eps,
                                                weight_decay, grad_clip, accumulation, warmup,
                                                anneal_steps, anneal_rate, base_scale)

// base_scale * d_model^-0.5 * min(step^-0.5, step * warmup^-1.5)
//   * anneal_rate^(number of anneal steps <= step).   Requires step >= 1.
double lr_at(long step, const OptimizerConfig& cfg, int d_model = 256);

}  // namespace emotts::training
