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

// HiFi-GAN generator (inference only): input conv -> per stage
// (LeakyReLU, transposed-conv upsampling, mean of multi-receptive-field
// residual blocks) -> LeakyReLU -> output conv -> tanh. Signals are
// (time x channels); the generator is templated on the scalar type so the
// same weights run in float for speed or double for tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "emotts/errors.h"
#include "emotts/nn/conv.h"

namespace emotts::vocoder {

struct GeneratorConfig {
  int n_mels = 80;
  std::vector<int> upsample_rates = {8, 8, 2, 2};
  std::vector<int> upsample_kernels = {16, 16, 4, 4};
  int upsample_initial_channel = 512;
  std::vector<int> resblock_kernels = {3, 7, 11};
  std::vector<std::vector<int>> resblock_dilations = {{1, 3, 5}, {1, 3, 5}, {1, 3, 5}};
  int pre_kernel = 7;
  int post_kernel = 7;

  int hop_length() const;
  int stage_channels(std::size_t stage) const;  // output channels of stage `stage`
  // Throws ConfigError on inconsistent lists or when the upsampling product
  // differs from `hop_length` (when given).
  void validate(int hop_length = 0) const;
  // Half-width, in mel frames, of the window of input frames that can
  // influence one output sample.
  int receptive_radius_frames() const;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GeneratorConfig, n_mels, upsample_rates,
                                                upsample_kernels, upsample_initial_channel,
                                                resblock_kernels, resblock_dilations, pre_kernel,
                                                post_kernel)

template <typename Scalar>
struct ConvWeights {
  nn::MatrixX<Scalar> weight;  // conv: kernel*in x out; transposed: in x kernel*out
  nn::MatrixX<Scalar> bias;    // 1 x out
};

template <typename Scalar>
struct ResBlockWeights {
  std::vector<ConvWeights<Scalar>> convs1;  // dilated
  std::vector<ConvWeights<Scalar>> convs2;  // dilation 1
};

template <typename Scalar>
struct GeneratorWeights {
  ConvWeights<Scalar> conv_pre;
  std::vector<ConvWeights<Scalar>> ups;
  std::vector<ResBlockWeights<Scalar>> resblocks;  // stage-major
  ConvWeights<Scalar> conv_post;

  template <typename Other>
  GeneratorWeights<Other> cast() const {
    auto c = [](const ConvWeights<Scalar>& w) {
      return ConvWeights<Other>{w.weight.template cast<Other>(), w.bias.template cast<Other>()};
    };
    GeneratorWeights<Other> out;
    out.conv_pre = c(conv_pre);
    for (const auto& u : ups) out.ups.push_back(c(u));
    for (const auto& r : resblocks) {
      ResBlockWeights<Other> rb;
      for (const auto& w : r.convs1) rb.convs1.push_back(c(w));
      for (const auto& w : r.convs2) rb.convs2.push_back(c(w));
      out.resblocks.push_back(std::move(rb));
    }
    out.conv_post = c(conv_post);
    return out;
  }
};

// Named tensors in the layout of the published generator state dict
// ("conv_pre.weight", "ups.0.weight", "resblocks.4.convs1.2.bias", ...)
// together with their expected shapes in this library's layout.
struct TensorSpec {
  std::string name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};
std::vector<TensorSpec> generator_tensor_specs(const GeneratorConfig& cfg);

// Assembles weights from named (rows x cols) tensors; throws WeightMismatch
// naming the first missing or mis-shaped tensor.
GeneratorWeights<double> weights_from_tensors(
    const GeneratorConfig& cfg,
    const std::vector<std::pair<std::string, Eigen::MatrixXd>>& tensors);
std::vector<std::pair<std::string, Eigen::MatrixXd>> weights_to_tensors(
    const GeneratorConfig& cfg, const GeneratorWeights<double>& w);

// Gaussian weights with the given stddev and zero biases (tests, smoke runs).
GeneratorWeights<double> random_generator_weights(const GeneratorConfig& cfg, std::uint64_t seed,
                                                  double stddev = 0.01);

// Checkpoint kind "hifigan_generator"; config {generator}.
void save_generator(const std::filesystem::path& path, const GeneratorConfig& cfg,
                    const GeneratorWeights<double>& w);
std::pair<GeneratorConfig, GeneratorWeights<double>> load_generator(
    const std::filesystem::path& path);

// Imports a directory of .npy files named after the published state-dict
// keys (see tools/export_hifigan_npy.py). Weight-normalised pairs
// (name.weight_g, name.weight_v) are folded into name.weight.
GeneratorWeights<double> import_generator_npy(const std::filesystem::path& dir,
                                              const GeneratorConfig& cfg);

inline constexpr double kLeakySlope = 0.1;
// Slope used by the final activation (PyTorch's leaky_relu default).
inline constexpr double kFinalLeakySlope = 0.01;

template <typename Derived>
nn::MatrixX<typename Derived::Scalar> leaky_relu(const Eigen::MatrixBase<Derived>& x,
                                                 double slope = kLeakySlope) {
  using Scalar = typename Derived::Scalar;
  const auto s = static_cast<Scalar>(slope);
  return x.unaryExpr([s](Scalar v) { return v > Scalar(0) ? v : v * s; });
}

// (frames x n_mels) mel -> frames * hop_length samples in [-1, 1].
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hifigan_generate(const nn::MatrixX<Scalar>& mel,
                                                          const GeneratorWeights<Scalar>& w,
                                                          const GeneratorConfig& cfg) {
  if (mel.cols() != cfg.n_mels) {
    throw ShapeError("generator expects " + std::to_string(cfg.n_mels) + " mel bins, got " +
                     std::to_string(mel.cols()));
  }
  if (mel.rows() == 0) return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(0);
  const std::size_t n_kernels = cfg.resblock_kernels.size();
  nn::MatrixX<Scalar> x = nn::conv1d(mel, w.conv_pre.weight, w.conv_pre.bias, cfg.pre_kernel);
  for (std::size_t i = 0; i < cfg.upsample_rates.size(); ++i) {
    const int u = cfg.upsample_rates[i];
    const int k = cfg.upsample_kernels[i];
    x = nn::conv_transpose1d(leaky_relu(x), w.ups[i].weight, w.ups[i].bias, k, u, (k - u) / 2);
    nn::MatrixX<Scalar> sum = nn::MatrixX<Scalar>::Zero(x.rows(), x.cols());
    for (std::size_t j = 0; j < n_kernels; ++j) {
      const auto& rb = w.resblocks[i * n_kernels + j];
      const int kernel = cfg.resblock_kernels[j];
      const auto& dilations = cfg.resblock_dilations[j];
      nn::MatrixX<Scalar> h = x;
      for (std::size_t d = 0; d < dilations.size(); ++d) {
        nn::MatrixX<Scalar> t = nn::conv1d(leaky_relu(h), rb.convs1[d].weight, rb.convs1[d].bias,
                                           kernel, dilations[d]);
        t = nn::conv1d(leaky_relu(t), rb.convs2[d].weight, rb.convs2[d].bias, kernel, 1);
        h += t;
      }
      sum += h;
    }
    x = sum / static_cast<Scalar>(n_kernels);
  }
  const nn::MatrixX<Scalar> y = nn::conv1d(leaky_relu(x, kFinalLeakySlope), w.conv_post.weight,
                                           w.conv_post.bias, cfg.post_kernel);
  return y.col(0).array().tanh().matrix();
}

}  // namespace emotts::vocoder
