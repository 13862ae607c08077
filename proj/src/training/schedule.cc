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

#include "emotts/training/schedule.h"

#include <algorithm>
#include <cmath>

#include "emotts/errors.h"

namespace emotts::training {

void OptimizerConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (accumulation < 1) throw ConfigError("accumulation must be positive");
  if (warmup < 1) throw ConfigError("warmup must be at least 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("Adam betas must be in [0, 1)");
  }
  if (!(eps > 0.0)) throw ConfigError("Adam eps must be positive");
  if (weight_decay < 0.0) throw ConfigError("weight_decay must be non-negative");
  if (!(grad_clip > 0.0)) throw ConfigError("grad_clip must be positive");
  if (!(anneal_rate > 0.0)) throw ConfigError("anneal_rate must be positive");
  if (!(base_scale > 0.0)) throw ConfigError("base_scale must be positive");
  for (std::size_t i = 1; i < anneal_steps.size(); ++i) {
    if (anneal_steps[i] <= anneal_steps[i - 1]) {
      throw ConfigError("anneal_steps must be strictly increasing");
    }
  }
}

double lr_at(long step, const OptimizerConfig& cfg, int d_model) {
  if (step < 1) throw ConfigError("lr_at: step must be >= 1");
  const double s = static_cast<double>(step);
  const double warm = static_cast<double>(cfg.warmup);
  double lr = cfg.base_scale / std::sqrt(static_cast<double>(d_model)) *
              std::min(1.0 / std::sqrt(s), s * std::pow(warm, -1.5));
  for (long threshold : cfg.anneal_steps) {
    if (step >= threshold) lr *= cfg.anneal_rate;
  }
  return lr;
}

}  // namespace emotts::training
