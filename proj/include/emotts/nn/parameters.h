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

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "emotts/nn/var.h"

namespace emotts::nn {

// Named, ordered collection of trainable tensors. Layers hold Var handles that
// alias the entries here, so updating a value in the store updates the layer.
class ParameterStore {
 public:
  Var add(const std::string& name, Matrix init);

  bool contains(const std::string& name) const;
  const Var& get(const std::string& name) const;
  const std::vector<std::pair<std::string, Var>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }
  Index scalar_count() const;

  void zero_grad();
  // Euclidean norm over all parameter gradients.
  double grad_norm() const;
  bool all_finite() const;

  // Copies values by name; throws WeightMismatch naming the first tensor
  // that is missing or shaped differently.
  void load(const std::vector<std::pair<std::string, Matrix>>& tensors);
  std::vector<std::pair<std::string, Matrix>> snapshot() const;

 private:
  std::vector<std::pair<std::string, Var>> entries_;
  std::map<std::string, std::size_t> index_;
};

// Seeded weight initialisation.
class Initializer {
 public:
  explicit Initializer(std::uint64_t seed) : rng_(seed) {}

  Matrix xavier_uniform(Index rows, Index cols, Index fan_in, Index fan_out);
  Matrix normal(Index rows, Index cols, double stddev);
  Matrix uniform(Index rows, Index cols, double bound);

 private:
  std::mt19937_64 rng_;
};

// Dropout and mode switch threaded through a forward pass.
struct ForwardContext {
  bool training = false;
  std::mt19937_64* rng = nullptr;
};

}  // namespace emotts::nn
