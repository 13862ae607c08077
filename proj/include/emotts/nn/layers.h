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

#include <span>
#include <string>
#include <vector>

#include "emotts/nn/ops.h"
#include "emotts/nn/parameters.h"

namespace emotts::nn {

struct Linear {
  Linear() = default;
  Linear(ParameterStore& store, Initializer& init, const std::string& name,
         Index in, Index out);
  Var forward(const Var& x) const;

  Var weight;  // in x out
  Var bias;    // 1 x out
};

struct LayerNorm {
  LayerNorm() = default;
  LayerNorm(ParameterStore& store, const std::string& name, Index dim);
  Var forward(const Var& x) const { return layer_norm(x, gamma, beta); }

  Var gamma;
  Var beta;
};

struct Conv1d {
  Conv1d() = default;
  Conv1d(ParameterStore& store, Initializer& init, const std::string& name,
         Index in, Index out, Index kernel, Index dilation = 1);
  Var forward(const Var& x) const {
    return conv1d(x, weight, bias, kernel, dilation);
  }

  Var weight;  // kernel*in x out
  Var bias;
  Index kernel = 1;
  Index dilation = 1;
};

struct Embedding {
  Embedding() = default;
  Embedding(ParameterStore& store, Initializer& init, const std::string& name,
            Index count, Index dim, double stddev);
  Var forward(std::span<const Index> ids) const {
    return gather_rows(table, ids);
  }

  Var table;
};

// Multi-head scaled dot-product self-attention over a (T x d) sequence whose
// first `valid` rows are real; keys at or beyond `valid` receive zero weight.
struct MultiHeadAttention {
  MultiHeadAttention() = default;
  MultiHeadAttention(ParameterStore& store, Initializer& init,
                     const std::string& name, Index dim, Index heads);

  // When `weights_out` is non-null it receives one (T x T) matrix per head.
  Var forward(const Var& x, Index valid,
              std::vector<Matrix>* weights_out = nullptr) const;

  Linear query, key, value, output;
  Index heads = 1;
};

// Sinusoidal position table (rows = positions).
Matrix sinusoid_table(Index positions, Index dim);

}  // namespace emotts::nn
