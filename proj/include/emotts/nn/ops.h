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

#include <random>
#include <span>
#include <vector>

#include "emotts/nn/var.h"

namespace emotts::nn {

Var matmul(const Var& a, const Var& b);
// a * b^T
Var matmul_nt(const Var& a, const Var& b);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var hadamard(const Var& a, const Var& b);
Var scale(const Var& a, double s);
// Adds a (1 x C) row to every row of a.
Var add_row(const Var& a, const Var& row);

inline Var operator+(const Var& a, const Var& b) { return add(a, b); }
inline Var operator-(const Var& a, const Var& b) { return sub(a, b); }
inline Var operator*(const Var& a, double s) { return scale(a, s); }

Var relu(const Var& x);
Var tanh(const Var& x);
Var sigmoid(const Var& x);
Var gelu(const Var& x);
Var abs(const Var& x);
Var square(const Var& x);
// Gated linear unit over column halves: left * sigmoid(right).
Var glu(const Var& x);

// Row-wise softmax; columns >= valid_cols get probability exactly 0.
Var softmax_rows(const Var& x, Index valid_cols);
Var log_softmax_rows(const Var& x);

// Per-row normalisation with learned (1 x C) gain and bias.
Var layer_norm(const Var& x, const Var& gamma, const Var& beta,
               double eps = 1e-5);

// out.row(i) = table.row(index[i]); gradient scatters back.
Var gather_rows(const Var& table, std::span<const Index> index);

// "Same" 1D convolution; weight (kernel*Cin x Cout), bias (1 x Cout).
Var conv1d(const Var& x, const Var& weight, const Var& bias, Index kernel,
           Index dilation = 1);

Var slice_cols(const Var& x, Index start, Index count);
Var hcat(const std::vector<Var>& parts);

// Zeroes rows >= valid. Identity (no new node) when valid >= rows.
Var mask_rows(const Var& x, Index valid);

// Inverted dropout; identity when !training or p == 0.
Var dropout(const Var& x, double p, bool training, std::mt19937_64* rng);

// 1x1 reductions.
Var sum(const Var& x);
Var sum_rows_upto(const Var& x, Index valid);  // sum over rows < valid
Var mean(const Var& x);
Var pick(const Var& x, Index row, Index col);
Var add_scalars(const std::vector<Var>& terms);

}  // namespace emotts::nn
