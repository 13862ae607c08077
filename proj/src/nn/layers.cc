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

#include "emotts/nn/layers.h"

#include <cmath>

#include "emotts/errors.h"

namespace emotts::nn {

Linear::Linear(ParameterStore& store, Initializer& init,
               const std::string& name, Index in, Index out)
    : weight(store.add(name + ".weight", init.xavier_uniform(in, out, in, out))),
      bias(store.add(name + ".bias", Matrix::Zero(1, out))) {}

Var Linear::forward(const Var& x) const {
  return add_row(matmul(x, weight), bias);
}

LayerNorm::LayerNorm(ParameterStore& store, const std::string& name, Index dim)
    : gamma(store.add(name + ".gamma", Matrix::Ones(1, dim))),
      beta(store.add(name + ".beta", Matrix::Zero(1, dim))) {}

Conv1d::Conv1d(ParameterStore& store, Initializer& init,
               const std::string& name, Index in, Index out, Index kernel,
               Index dilation)
    : weight(store.add(name + ".weight",
                       init.xavier_uniform(kernel * in, out, kernel * in,
                                           kernel * out))),
      bias(store.add(name + ".bias", Matrix::Zero(1, out))),
      kernel(kernel),
      dilation(dilation) {}

Embedding::Embedding(ParameterStore& store, Initializer& init,
                     const std::string& name, Index count, Index dim,
                     double stddev)
    : table(store.add(name + ".table", init.normal(count, dim, stddev))) {}

MultiHeadAttention::MultiHeadAttention(ParameterStore& store,
                                       Initializer& init,
                                       const std::string& name, Index dim,
                                       Index heads)
    : query(store, init, name + ".query", dim, dim),
      key(store, init, name + ".key", dim, dim),
      value(store, init, name + ".value", dim, dim),
      output(store, init, name + ".output", dim, dim),
      heads(heads) {
  if (heads <= 0 || dim % heads != 0) {
    throw ConfigError(name + ": hidden size " + std::to_string(dim) +
                      " not divisible by " + std::to_string(heads) + " heads");
  }
}

Var MultiHeadAttention::forward(const Var& x, Index valid,
                                std::vector<Matrix>* weights_out) const {
  const Index dim = x.cols();
  const Index head_dim = dim / heads;
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  const Var q = query.forward(x);
  const Var k = key.forward(x);
  const Var v = value.forward(x);
  std::vector<Var> contexts;
  contexts.reserve(static_cast<std::size_t>(heads));
  for (Index h = 0; h < heads; ++h) {
    const Var qh = slice_cols(q, h * head_dim, head_dim);
    const Var kh = slice_cols(k, h * head_dim, head_dim);
    const Var vh = slice_cols(v, h * head_dim, head_dim);
    const Var weights = softmax_rows(scale(matmul_nt(qh, kh), inv_scale), valid);
    if (weights_out != nullptr) weights_out->push_back(weights.value());
    contexts.push_back(matmul(weights, vh));
  }
  const Var joined = heads == 1 ? contexts.front() : hcat(contexts);
  return output.forward(joined);
}

Matrix sinusoid_table(Index positions, Index dim) {
  Matrix table(positions, dim);
  for (Index pos = 0; pos < positions; ++pos) {
    for (Index i = 0; i < dim; ++i) {
      const double exponent =
          static_cast<double>(2 * (i / 2)) / static_cast<double>(dim);
      const double angle =
          static_cast<double>(pos) / std::pow(10000.0, exponent);
      table(pos, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  }
  return table;
}

}  // namespace emotts::nn
