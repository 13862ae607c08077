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

#include "emotts/nn/parameters.h"

namespace emotts::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-9;
  // L2 penalty added to the gradient before the moment updates.
  double weight_decay = 0.0;
};

// Adam with bias-corrected moments:
//   g <- g + wd*p;  m <- b1*m + (1-b1)*g;  v <- b2*v + (1-b2)*g^2
//   p <- p - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
class Adam {
 public:
  Adam(ParameterStore& store, AdamConfig config);

  // Applies one update from the gradients currently held by the store.
  // Parameters without an accumulated gradient see g = 0.
  void step(double lr);
  long steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  ParameterStore* store_;
  AdamConfig config_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  long t_ = 0;
};

// Scales all gradients by max_norm / norm when the global norm exceeds
// max_norm. Returns the pre-clipping norm.
double clip_grad_norm(ParameterStore& store, double max_norm);

}  // namespace emotts::nn
