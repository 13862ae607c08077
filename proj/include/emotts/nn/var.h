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

// Minimal reverse-mode automatic differentiation over dense Eigen matrices.
//
// A Var is a shared handle to a graph node holding a value and, after
// backward(), an accumulated gradient. Operations in ops.h create new nodes
// that remember their parents and a closure propagating the output gradient.
// Graph construction is skipped entirely when no input requires a gradient or
// when a NoGradGuard is active, so inference pays only for the arithmetic.

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <vector>

namespace emotts::nn {

using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

namespace internal {

struct Node {
  Matrix value;
  Matrix grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(const Matrix&)> backward;

  template <typename Derived>
  void accumulate(const Eigen::MatrixBase<Derived>& g) {
    if (grad.size() == 0) {
      grad = g;
    } else {
      grad += g;
    }
  }
};

}  // namespace internal

class Var {
 public:
  Var() = default;
  explicit Var(Matrix value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Matrix& value() const { return node_->value; }
  // Direct access for optimizers and checkpoint loading.
  Matrix& mutable_value() { return node_->value; }

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return node_->grad.size() != 0; }
  // Gradient, or an all-zero matrix of the value's shape if none accumulated.
  Matrix grad() const;
  // Mutable gradient storage, allocated as zeros on first access.
  Matrix& grad_ref();
  void zero_grad() { node_->grad.resize(0, 0); }

  Index rows() const { return node_->value.rows(); }
  Index cols() const { return node_->value.cols(); }
  double scalar() const { return node_->value(0, 0); }

  // Seeds d(this)/d(this) = 1 and propagates through the graph. Intermediate
  // gradients are released afterwards; leaf gradients accumulate.
  void backward() const;

  const std::shared_ptr<internal::Node>& node() const { return node_; }

  template <typename Derived>
  void accumulate_grad(const Eigen::MatrixBase<Derived>& g) const {
    node_->accumulate(g);
  }

 private:
  std::shared_ptr<internal::Node> node_;
};

inline Var constant(Matrix value) { return Var(std::move(value), false); }
inline Var parameter(Matrix value) { return Var(std::move(value), true); }

bool grad_enabled();

// Disables graph construction on this thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// Builds an op result. `backward` receives the output gradient and must
// accumulate into the parents that require gradients.
Var make_op(Matrix value, std::vector<Var> parents,
            std::function<void(const Matrix&)> backward);

}  // namespace emotts::nn
