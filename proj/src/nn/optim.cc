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

#include "emotts/nn/optim.h"

#include <cmath>

namespace emotts::nn {

Adam::Adam(ParameterStore& store, AdamConfig config) : store_(&store), config_(config) {
  for (const auto& [name, var] : store.entries()) {
    m_.push_back(Matrix::Zero(var.rows(), var.cols()));
    v_.push_back(Matrix::Zero(var.rows(), var.cols()));
  }
}

void Adam::step(double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  auto& entries = store_->entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Var p = entries[i].second;
    Matrix g = p.grad();
    if (config_.weight_decay != 0.0) g += config_.weight_decay * p.value();
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * g;
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * g.cwiseAbs2();
    p.mutable_value().array() -=
        lr * (m_[i].array() / bc1) / ((v_[i].array() / bc2).sqrt() + config_.eps);
  }
}

double clip_grad_norm(ParameterStore& store, double max_norm) {
  const double norm = store.grad_norm();
  if (norm > max_norm && norm > 0.0) {
    const double s = max_norm / norm;
    for (const auto& [name, var] : store.entries()) {
      if (var.has_grad()) Var(var).grad_ref() *= s;
    }
  }
  return norm;
}

}  // namespace emotts::nn
