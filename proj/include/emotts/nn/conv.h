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

// Time-major 1D convolution kernels shared by the trainable layers and the
// inference-only vocoder. Signals are (time x channels) matrices; weights are
// laid out tap-major so a convolution is one im2col followed by one GEMM.

#include <Eigen/Core>

#include <algorithm>

namespace emotts::nn {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Left zero-padding that keeps the output length equal to the input length
// for an odd kernel.
inline Eigen::Index same_padding(Eigen::Index kernel, Eigen::Index dilation) {
  return (kernel - 1) * dilation / 2;
}

// Row t, block k of the result holds x.row(t + k * dilation - pad), or zeros
// outside the signal. Result is (T x kernel*C).
template <typename Derived>
MatrixX<typename Derived::Scalar> im2col(const Eigen::MatrixBase<Derived>& x,
                                         Eigen::Index kernel,
                                         Eigen::Index dilation,
                                         Eigen::Index pad) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index t_len = x.rows();
  const Eigen::Index channels = x.cols();
  MatrixX<Scalar> col = MatrixX<Scalar>::Zero(t_len, kernel * channels);
  for (Eigen::Index k = 0; k < kernel; ++k) {
    const Eigen::Index offset = k * dilation - pad;
    const Eigen::Index dst_begin = std::max<Eigen::Index>(0, -offset);
    const Eigen::Index dst_end = std::min(t_len, t_len - offset);
    if (dst_end <= dst_begin) continue;
    col.block(dst_begin, k * channels, dst_end - dst_begin, channels) =
        x.middleRows(dst_begin + offset, dst_end - dst_begin);
  }
  return col;
}

// Adjoint of im2col: scatters a (T x kernel*C) gradient back to (T x C).
template <typename Derived>
MatrixX<typename Derived::Scalar> col2im(const Eigen::MatrixBase<Derived>& col,
                                         Eigen::Index channels,
                                         Eigen::Index kernel,
                                         Eigen::Index dilation,
                                         Eigen::Index pad) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index t_len = col.rows();
  MatrixX<Scalar> x = MatrixX<Scalar>::Zero(t_len, channels);
  for (Eigen::Index k = 0; k < kernel; ++k) {
    const Eigen::Index offset = k * dilation - pad;
    const Eigen::Index dst_begin = std::max<Eigen::Index>(0, -offset);
    const Eigen::Index dst_end = std::min(t_len, t_len - offset);
    if (dst_end <= dst_begin) continue;
    x.middleRows(dst_begin + offset, dst_end - dst_begin) +=
        col.block(dst_begin, k * channels, dst_end - dst_begin, channels);
  }
  return x;
}

// "Same" convolution. weight is (kernel*Cin x Cout), bias is (1 x Cout).
template <typename DX, typename DW, typename DB>
MatrixX<typename DX::Scalar> conv1d(const Eigen::MatrixBase<DX>& x,
                                    const Eigen::MatrixBase<DW>& weight,
                                    const Eigen::MatrixBase<DB>& bias,
                                    Eigen::Index kernel,
                                    Eigen::Index dilation = 1) {
  MatrixX<typename DX::Scalar> y =
      im2col(x, kernel, dilation, same_padding(kernel, dilation)) * weight;
  y.rowwise() += bias.row(0);
  return y;
}

// Transposed convolution with stride `stride` and symmetric crop `pad`.
// weight is (Cin x kernel*Cout). Output length is
// (T - 1) * stride + kernel - 2 * pad.
template <typename DX, typename DW, typename DB>
MatrixX<typename DX::Scalar> conv_transpose1d(const Eigen::MatrixBase<DX>& x,
                                              const Eigen::MatrixBase<DW>& weight,
                                              const Eigen::MatrixBase<DB>& bias,
                                              Eigen::Index kernel,
                                              Eigen::Index stride,
                                              Eigen::Index pad) {
  using Scalar = typename DX::Scalar;
  const Eigen::Index t_len = x.rows();
  const Eigen::Index out_channels = weight.cols() / kernel;
  const Eigen::Index full = (t_len - 1) * stride + kernel;
  const Eigen::Index out_len = full - 2 * pad;
  const MatrixX<Scalar> taps = x * weight;  // T x kernel*Cout
  MatrixX<Scalar> y = MatrixX<Scalar>::Zero(out_len, out_channels);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    for (Eigen::Index k = 0; k < kernel; ++k) {
      const Eigen::Index row = t * stride + k - pad;
      if (row < 0 || row >= out_len) continue;
      y.row(row) += taps.block(t, k * out_channels, 1, out_channels);
    }
  }
  y.rowwise() += bias.row(0);
  return y;
}

}  // namespace emotts::nn
