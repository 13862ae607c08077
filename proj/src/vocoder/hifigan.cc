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

#include "emotts/vocoder/hifigan.h"

#include <map>

#include "emotts/io/checkpoint.h"
#include "emotts/io/npy.h"

namespace emotts::vocoder {

namespace {

constexpr const char* kCheckpointKind = "hifigan_generator";

enum class ConvKind { kConv, kTransposed };

struct LayerSpec {
  std::string base;  // e.g. "resblocks.3.convs1.0"
  ConvKind kind;
  Eigen::Index in, out, kernel;
};

std::vector<LayerSpec> layer_specs(const GeneratorConfig& cfg) {
  std::vector<LayerSpec> specs;
  specs.push_back({"conv_pre", ConvKind::kConv, cfg.n_mels, cfg.upsample_initial_channel,
                   cfg.pre_kernel});
  for (std::size_t i = 0; i < cfg.upsample_rates.size(); ++i) {
    const int in = i == 0 ? cfg.upsample_initial_channel : cfg.stage_channels(i - 1);
    specs.push_back({"ups." + std::to_string(i), ConvKind::kTransposed, in, cfg.stage_channels(i),
                     cfg.upsample_kernels[i]});
  }
  std::size_t block = 0;
  for (std::size_t i = 0; i < cfg.upsample_rates.size(); ++i) {
    const int ch = cfg.stage_channels(i);
    for (std::size_t j = 0; j < cfg.resblock_kernels.size(); ++j, ++block) {
      for (const char* group : {"convs1", "convs2"}) {
        for (std::size_t d = 0; d < cfg.resblock_dilations[j].size(); ++d) {
          specs.push_back({"resblocks." + std::to_string(block) + "." + group + "." +
                               std::to_string(d),
                           ConvKind::kConv, ch, ch, cfg.resblock_kernels[j]});
        }
      }
    }
  }
  specs.push_back({"conv_post", ConvKind::kConv, cfg.stage_channels(cfg.upsample_rates.size() - 1),
                   1, cfg.post_kernel});
  return specs;
}

std::pair<Eigen::Index, Eigen::Index> weight_shape(const LayerSpec& s) {
  return s.kind == ConvKind::kConv ? std::pair{s.kernel * s.in, s.out}
                                   : std::pair{s.in, s.kernel * s.out};
}

// Visits every conv of `w` in layer_specs order.
template <typename W, typename F>
void for_each_conv(const GeneratorConfig& cfg, W& w, F&& f) {
  const auto specs = layer_specs(cfg);
  std::size_t s = 0;
  f(specs[s++], w.conv_pre);
  for (auto& u : w.ups) f(specs[s++], u);
  for (auto& rb : w.resblocks) {
    for (auto& c : rb.convs1) f(specs[s++], c);
    for (auto& c : rb.convs2) f(specs[s++], c);
  }
  f(specs[s++], w.conv_post);
}

GeneratorWeights<double> empty_weights(const GeneratorConfig& cfg) {
  GeneratorWeights<double> w;
  w.ups.resize(cfg.upsample_rates.size());
  for (std::size_t i = 0; i < cfg.upsample_rates.size(); ++i) {
    for (std::size_t j = 0; j < cfg.resblock_kernels.size(); ++j) {
      ResBlockWeights<double> rb;
      rb.convs1.resize(cfg.resblock_dilations[j].size());
      rb.convs2.resize(cfg.resblock_dilations[j].size());
      w.resblocks.push_back(std::move(rb));
    }
  }
  return w;
}

// Folds weight normalisation: w = g * v / ||v|| per slice along axis 0.
io::NpyArray fold_weight_norm(const io::NpyArray& g, const io::NpyArray& v,
                              const std::string& name) {
  if (v.shape.empty() || g.size() != v.shape[0]) {
    throw WeightMismatch(name + ": weight_g does not match weight_v along axis 0");
  }
  io::NpyArray w = v;
  const std::size_t slice = v.size() / v.shape[0];
  for (std::size_t o = 0; o < v.shape[0]; ++o) {
    double norm = 0.0;
    for (std::size_t i = 0; i < slice; ++i) norm += v.data[o * slice + i] * v.data[o * slice + i];
    norm = std::sqrt(norm);
    const double s = norm > 0.0 ? g.data[o] / norm : 0.0;
    for (std::size_t i = 0; i < slice; ++i) w.data[o * slice + i] *= s;
  }
  return w;
}

}  // namespace

int GeneratorConfig::hop_length() const {
  return std::accumulate(upsample_rates.begin(), upsample_rates.end(), 1, std::multiplies<>());
}

int GeneratorConfig::stage_channels(std::size_t stage) const {
  return upsample_initial_channel >> (stage + 1);
}

void GeneratorConfig::validate(int hop) const {
  if (n_mels < 1) throw ConfigError("generator n_mels must be positive");
  if (upsample_rates.empty() || upsample_rates.size() != upsample_kernels.size()) {
    throw ConfigError("generator needs one upsample kernel per upsample rate");
  }
  for (std::size_t i = 0; i < upsample_rates.size(); ++i) {
    const int u = upsample_rates[i];
    const int k = upsample_kernels[i];
    if (u < 1 || k < u || (k - u) % 2 != 0) {
      throw ConfigError("upsample stage " + std::to_string(i) +
                        ": kernel must be >= rate with an even difference");
    }
  }
  if (resblock_kernels.empty() || resblock_kernels.size() != resblock_dilations.size()) {
    throw ConfigError("generator needs one dilation set per residual kernel");
  }
  for (int k : resblock_kernels) {
    if (k < 1 || k % 2 == 0) throw ConfigError("residual kernels must be odd");
  }
  if (pre_kernel % 2 == 0 || post_kernel % 2 == 0) throw ConfigError("pre/post kernels must be odd");
  if (stage_channels(upsample_rates.size() - 1) < 1) {
    throw ConfigError("upsample_initial_channel too small for the number of stages");
  }
  if (hop > 0 && hop_length() != hop) {
    throw ConfigError("product of upsample rates (" + std::to_string(hop_length()) +
                      ") must equal hop_length " + std::to_string(hop));
  }
}

int GeneratorConfig::receptive_radius_frames() const {
  // Accumulate the half-width in output-sample units of each stage,
  // expressed in input frames by dividing by the cumulative upsampling.
  double radius = (pre_kernel - 1) / 2.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < upsample_rates.size(); ++i) {
    radius += std::ceil(static_cast<double>(upsample_kernels[i]) / upsample_rates[i]) / scale;
    scale *= upsample_rates[i];
    int block = 0;
    for (std::size_t j = 0; j < resblock_kernels.size(); ++j) {
      const int half = (resblock_kernels[j] - 1) / 2;
      int r = 0;
      for (int d : resblock_dilations[j]) r += half * d + half;
      block = std::max(block, r);
    }
    radius += block / scale;
  }
  radius += ((post_kernel - 1) / 2.0) / scale;
  return static_cast<int>(std::ceil(radius)) + 1;
}

std::vector<TensorSpec> generator_tensor_specs(const GeneratorConfig& cfg) {
  cfg.validate();
  std::vector<TensorSpec> out;
  for (const auto& s : layer_specs(cfg)) {
    const auto [r, c] = weight_shape(s);
    out.push_back({s.base + ".weight", r, c});
    out.push_back({s.base + ".bias", 1, s.out});
  }
  return out;
}

GeneratorWeights<double> weights_from_tensors(
    const GeneratorConfig& cfg,
    const std::vector<std::pair<std::string, Eigen::MatrixXd>>& tensors) {
  cfg.validate();
  std::map<std::string, const Eigen::MatrixXd*> by_name;
  for (const auto& [name, m] : tensors) by_name[name] = &m;
  auto fetch = [&](const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw WeightMismatch("generator tensor missing: " + name);
    if (it->second->rows() != rows || it->second->cols() != cols) {
      throw WeightMismatch("generator tensor " + name + " is " +
                           std::to_string(it->second->rows()) + "x" +
                           std::to_string(it->second->cols()) + ", expected " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    }
    return *it->second;
  };
  GeneratorWeights<double> w = empty_weights(cfg);
  for_each_conv(cfg, w, [&](const LayerSpec& s, ConvWeights<double>& c) {
    const auto [r, cols] = weight_shape(s);
    c.weight = fetch(s.base + ".weight", r, cols);
    c.bias = fetch(s.base + ".bias", 1, s.out);
  });
  return w;
}

std::vector<std::pair<std::string, Eigen::MatrixXd>> weights_to_tensors(
    const GeneratorConfig& cfg, const GeneratorWeights<double>& w) {
  std::vector<std::pair<std::string, Eigen::MatrixXd>> out;
  for_each_conv(cfg, w, [&](const LayerSpec& s, const ConvWeights<double>& c) {
    out.emplace_back(s.base + ".weight", c.weight);
    out.emplace_back(s.base + ".bias", c.bias);
  });
  return out;
}

GeneratorWeights<double> random_generator_weights(const GeneratorConfig& cfg, std::uint64_t seed,
                                                  double stddev) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, stddev);
  GeneratorWeights<double> w = empty_weights(cfg);
  for_each_conv(cfg, w, [&](const LayerSpec& s, ConvWeights<double>& c) {
    const auto [r, cols] = weight_shape(s);
    c.weight = Eigen::MatrixXd::NullaryExpr(r, cols, [&] { return n(rng); });
    c.bias = Eigen::MatrixXd::Zero(1, s.out);
  });
  return w;
}

void save_generator(const std::filesystem::path& path, const GeneratorConfig& cfg,
                    const GeneratorWeights<double>& w) {
  io::Checkpoint ckpt;
  ckpt.kind = kCheckpointKind;
  ckpt.config = {{"generator", cfg}};
  ckpt.tensors = weights_to_tensors(cfg, w);
  io::save_checkpoint(path, ckpt);
}

std::pair<GeneratorConfig, GeneratorWeights<double>> load_generator(
    const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ModelNotLoaded("vocoder checkpoint not found: " + path.string());
  }
  const auto ckpt = io::load_checkpoint(path);
  if (ckpt.kind != kCheckpointKind) {
    throw WeightMismatch(path.string() + " holds a '" + ckpt.kind + "' checkpoint");
  }
  GeneratorConfig cfg;
  try {
    cfg = ckpt.config.at("generator").get<GeneratorConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw WeightMismatch(path.string() + ": bad generator header: " + e.what());
  }
  return {cfg, weights_from_tensors(cfg, ckpt.tensors)};
}

GeneratorWeights<double> import_generator_npy(const std::filesystem::path& dir,
                                              const GeneratorConfig& cfg) {
  cfg.validate();
  auto load = [&](const std::string& name) -> std::optional<io::NpyArray> {
    const auto p = dir / (name + ".npy");
    if (!std::filesystem::exists(p)) return std::nullopt;
    return io::read_npy(p);
  };
  GeneratorWeights<double> w = empty_weights(cfg);
  for_each_conv(cfg, w, [&](const LayerSpec& s, ConvWeights<double>& c) {
    std::optional<io::NpyArray> weight = load(s.base + ".weight");
    if (!weight) {
      const auto g = load(s.base + ".weight_g");
      const auto v = load(s.base + ".weight_v");
      if (!g || !v) throw WeightMismatch("generator tensor missing: " + s.base + ".weight");
      weight = fold_weight_norm(*g, *v, s.base);
    }
    // Published layouts: Conv1d (out, in, k); ConvTranspose1d (in, out, k).
    const std::vector<std::size_t> expected =
        s.kind == ConvKind::kConv
            ? std::vector<std::size_t>{static_cast<std::size_t>(s.out),
                                       static_cast<std::size_t>(s.in),
                                       static_cast<std::size_t>(s.kernel)}
            : std::vector<std::size_t>{static_cast<std::size_t>(s.in),
                                       static_cast<std::size_t>(s.out),
                                       static_cast<std::size_t>(s.kernel)};
    if (weight->shape != expected) {
      std::string got;
      for (auto d : weight->shape) got += (got.empty() ? "" : ",") + std::to_string(d);
      throw WeightMismatch(s.base + ".weight has shape (" + got + "), expected (" +
                           std::to_string(expected[0]) + "," + std::to_string(expected[1]) + "," +
                           std::to_string(expected[2]) + ")");
    }
    const auto [rows, cols] = weight_shape(s);
    c.weight.resize(rows, cols);
    const Eigen::Index in = s.in, out = s.out, k = s.kernel;
    for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(expected[0]); ++a) {
      for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(expected[1]); ++b) {
        for (Eigen::Index t = 0; t < k; ++t) {
          const double v = weight->data[static_cast<std::size_t>((a * expected[1] + b) * k + t)];
          if (s.kind == ConvKind::kConv) {
            c.weight(t * in + b, a) = v;  // a = out channel, b = in channel
          } else {
            c.weight(a, t * out + b) = v;  // a = in channel, b = out channel
          }
        }
      }
    }
    const auto bias = load(s.base + ".bias");
    if (!bias || bias->size() != static_cast<std::size_t>(s.out)) {
      throw WeightMismatch("generator tensor missing or mis-shaped: " + s.base + ".bias");
    }
    c.bias = Eigen::Map<const Eigen::MatrixXd>(bias->data.data(), 1, s.out);
  });
  return w;
}

}  // namespace emotts::vocoder
