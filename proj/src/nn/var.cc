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

#include "emotts/nn/var.h"

#include <unordered_set>
#include <utility>

namespace emotts::nn {

namespace {
thread_local bool g_grad_enabled = true;
}  // namespace

Var::Var(Matrix value, bool requires_grad)
    : node_(std::make_shared<internal::Node>()) {
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

Matrix Var::grad() const {
  if (has_grad()) return node_->grad;
  return Matrix::Zero(rows(), cols());
}

Matrix& Var::grad_ref() {
  if (!has_grad()) node_->grad = Matrix::Zero(rows(), cols());
  return node_->grad;
}

void Var::backward() const {
  using internal::Node;
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  // Iterative post-order DFS; `order` ends up topologically sorted.
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (parent->requires_grad && visited.insert(parent).second) {
        stack.emplace_back(parent, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  node_->accumulate(Matrix::Ones(rows(), cols()));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (!node->backward || node->grad.size() == 0) continue;
    node->backward(node->grad);
    node->grad.resize(0, 0);
  }
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) {
  g_grad_enabled = false;
}

NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

Var make_op(Matrix value, std::vector<Var> parents,
            std::function<void(const Matrix&)> backward) {
  bool needs = false;
  if (g_grad_enabled) {
    for (const auto& p : parents) needs = needs || p.requires_grad();
  }
  Var out(std::move(value), needs);
  if (needs) {
    auto& node = *out.node();
    node.parents.reserve(parents.size());
    for (const auto& p : parents) node.parents.push_back(p.node());
    node.backward = std::move(backward);
  }
  return out;
}

}  // namespace emotts::nn
