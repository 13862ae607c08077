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

#include "emotts/nn/parameters.h"

#include <cmath>

#include "emotts/errors.h"

namespace emotts::nn {

Var ParameterStore::add(const std::string& name, Matrix init) {
  if (index_.count(name) != 0) {
    throw ConfigError("duplicate parameter name: " + name);
  }
  Var v = parameter(std::move(init));
  index_[name] = entries_.size();
  entries_.emplace_back(name, v);
  return v;
}

bool ParameterStore::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

const Var& ParameterStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw WeightMismatch("no parameter named " + name);
  return entries_[it->second].second;
}

Index ParameterStore::scalar_count() const {
  Index n = 0;
  for (const auto& [name, v] : entries_) n += v.value().size();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& [name, v] : entries_) v.zero_grad();
}

double ParameterStore::grad_norm() const {
  double sq = 0.0;
  for (const auto& [name, v] : entries_) {
    if (v.has_grad()) sq += v.node()->grad.squaredNorm();
  }
  return std::sqrt(sq);
}

bool ParameterStore::all_finite() const {
  for (const auto& [name, v] : entries_) {
    if (!v.value().allFinite()) return false;
  }
  return true;
}

void ParameterStore::load(
    const std::vector<std::pair<std::string, Matrix>>& tensors) {
  std::map<std::string, const Matrix*> by_name;
  for (const auto& [name, m] : tensors) by_name[name] = &m;
  for (auto& [name, v] : entries_) {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw WeightMismatch("checkpoint lacks tensor " + name);
    }
    const Matrix& m = *it->second;
    if (m.rows() != v.rows() || m.cols() != v.cols()) {
      throw WeightMismatch("tensor " + name + " has shape " +
                           std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ", expected " +
                           std::to_string(v.rows()) + "x" +
                           std::to_string(v.cols()));
    }
    v.mutable_value() = m;
  }
}

std::vector<std::pair<std::string, Matrix>> ParameterStore::snapshot() const {
  std::vector<std::pair<std::string, Matrix>> out;
  out.reserve(entries_.size());
  for (const auto& [name, v] : entries_) out.emplace_back(name, v.value());
  return out;
}

Matrix Initializer::xavier_uniform(Index rows, Index cols, Index fan_in,
                                   Index fan_out) {
  const double bound =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return uniform(rows, cols, bound);
}

Matrix Initializer::normal(Index rows, Index cols, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m(i) = dist(rng_);
  return m;
}

Matrix Initializer::uniform(Index rows, Index cols, double bound) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m(i) = dist(rng_);
  return m;
}

}  // namespace emotts::nn
