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

#include "emotts/acoustic/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"
#include "emotts/nn/ops.h"
#include "emotts/text/phonemes.h"

namespace emotts::acoustic {

namespace {

constexpr const char* kCheckpointKind = "acoustic_model";

std::vector<nn::Index> iota_index(nn::Index n) {
  std::vector<nn::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), nn::Index{0});
  return idx;
}

// First `n` rows of x.
nn::Var take_rows(const nn::Var& x, nn::Index n) {
  if (n == x.rows()) return x;
  return nn::gather_rows(x, iota_index(n));
}

nn::Var add_positions(const nn::Var& x) {
  if (x.rows() == 0) return x;
  return x + nn::constant(nn::sinusoid_table(x.rows(), x.cols()));
}

}  // namespace

void AcousticConfig::validate() const {
  auto positive = [](int v, const char* what) {
    if (v < 1) throw ConfigError(std::string("acoustic ") + what + " must be positive");
  };
  positive(n_symbols, "n_symbols");
  positive(encoder_layers, "encoder_layers");
  positive(encoder_heads, "encoder_heads");
  positive(encoder_hidden, "encoder_hidden");
  positive(decoder_layers, "decoder_layers");
  positive(decoder_heads, "decoder_heads");
  positive(decoder_hidden, "decoder_hidden");
  positive(ff_filter, "ff_filter");
  positive(ff_kernel, "ff_kernel");
  positive(variance_filter, "variance_filter");
  positive(variance_kernel, "variance_kernel");
  positive(n_bins, "n_bins");
  positive(n_mels, "n_mels");
  positive(postnet_channels, "postnet_channels");
  positive(postnet_kernel, "postnet_kernel");
  positive(n_speakers, "n_speakers");
  if (postnet_layers < 0) throw ConfigError("acoustic postnet_layers must be non-negative");
  if (encoder_hidden % encoder_heads != 0) {
    throw ConfigError("encoder_hidden " + std::to_string(encoder_hidden) +
                      " is not divisible by " + std::to_string(encoder_heads) + " heads");
  }
  if (decoder_hidden % decoder_heads != 0) {
    throw ConfigError("decoder_hidden " + std::to_string(decoder_hidden) +
                      " is not divisible by " + std::to_string(decoder_heads) + " heads");
  }
  if (decoder_hidden != encoder_hidden) {
    throw ConfigError("decoder_hidden must equal encoder_hidden (the length regulator "
                      "feeds encoder states straight into the decoder)");
  }
  if (multi_emotion && n_emotion != kNumEmotions) {
    throw ConfigError("n_emotion must be " + std::to_string(kNumEmotions) +
                      " when multi_emotion is set");
  }
  if (n_emotion < 1) throw ConfigError("acoustic n_emotion must be positive");
  if (ff_kernel % 2 == 0 || variance_kernel % 2 == 0 || postnet_kernel % 2 == 0) {
    throw ConfigError("acoustic convolution kernels must be odd");
  }
  for (double p : {encoder_dropout, decoder_dropout, variance_dropout, postnet_dropout}) {
    if (p < 0.0 || p >= 1.0) throw ConfigError("acoustic dropout rates must be in [0, 1)");
  }
  if (n_bins < 2) throw ConfigError("acoustic n_bins must be at least 2");
}

AcousticConfig AcousticConfig::tiny(int hidden, int mels) {
  AcousticConfig c;
  c.encoder_layers = 1;
  c.decoder_layers = 1;
  c.encoder_hidden = hidden;
  c.decoder_hidden = hidden;
  c.ff_filter = 2 * hidden;
  c.ff_kernel = 3;
  c.variance_filter = hidden;
  c.n_bins = 16;
  c.n_mels = mels;
  c.postnet_layers = 2;
  c.postnet_channels = hidden;
  c.postnet_kernel = 3;
  c.encoder_dropout = 0.0;
  c.decoder_dropout = 0.0;
  c.variance_dropout = 0.0;
  c.postnet_dropout = 0.0;
  return c;
}

Eigen::VectorXd bucket_boundaries(double lo, double hi, int n_bins) {
  if (n_bins < 2) throw ConfigError("need at least two buckets");
  return Eigen::VectorXd::LinSpaced(n_bins - 1, lo, hi);
}

int bucketize(double value, const Eigen::VectorXd& boundaries) {
  const double* begin = boundaries.data();
  const double* end = begin + boundaries.size();
  return static_cast<int>(std::lower_bound(begin, end, value) - begin);
}

std::vector<int> durations_from_log(const Eigen::VectorXd& log_durations, double scale) {
  std::vector<int> out(static_cast<std::size_t>(log_durations.size()));
  for (Eigen::Index i = 0; i < log_durations.size(); ++i) {
    const double frames = std::round((std::exp(log_durations(i)) - 1.0) * scale);
    out[static_cast<std::size_t>(i)] =
        std::isfinite(frames) ? static_cast<int>(std::clamp(frames, 0.0, 1e6)) : 0;
  }
  return out;
}

AcousticModel::AcousticModel(const AcousticConfig& config) : config_(config) {
  config_.validate();
  nn::Initializer init(config_.seed);
  const nn::Index d = config_.encoder_hidden;
  const double table_std = 1.0 / std::sqrt(static_cast<double>(d));

  phonemes_ = nn::Embedding(store_, init, "embed.phonemes", config_.n_symbols, d, table_std);
  for (int l = 0; l < config_.encoder_layers; ++l) {
    encoder_.push_back(make_block(init, "encoder.layer" + std::to_string(l), static_cast<int>(d),
                                  config_.encoder_heads));
  }
  if (config_.multi_speaker) {
    speakers_ = nn::Embedding(store_, init, "condition.speakers", config_.n_speakers, d, table_std);
  }
  if (config_.multi_emotion) {
    emotions_ = nn::Embedding(store_, init, "condition.emotions", config_.n_emotion, d, table_std);
    emotion_linear_ = nn::Linear(store_, init, "condition.emotion_linear", d, d);
  }
  duration_ = make_predictor(init, "variance.duration", static_cast<int>(d));
  duration_.head.bias.mutable_value().setConstant(config_.duration_bias);
  pitch_ = make_predictor(init, "variance.pitch", static_cast<int>(d));
  energy_ = make_predictor(init, "variance.energy", static_cast<int>(d));
  pitch_embedding_ = nn::Embedding(store_, init, "variance.pitch_embedding", config_.n_bins, d,
                                   table_std);
  energy_embedding_ = nn::Embedding(store_, init, "variance.energy_embedding", config_.n_bins, d,
                                    table_std);
  for (int l = 0; l < config_.decoder_layers; ++l) {
    decoder_.push_back(make_block(init, "decoder.layer" + std::to_string(l), config_.decoder_hidden,
                                  config_.decoder_heads));
  }
  mel_linear_ = nn::Linear(store_, init, "decoder.mel_linear", config_.decoder_hidden,
                           config_.n_mels);
  for (int l = 0; l < config_.postnet_layers; ++l) {
    const nn::Index in = l == 0 ? config_.n_mels : config_.postnet_channels;
    const nn::Index out = l + 1 == config_.postnet_layers ? config_.n_mels : config_.postnet_channels;
    postnet_.emplace_back(store_, init, "postnet.conv" + std::to_string(l), in, out,
                          config_.postnet_kernel);
  }
  set_stats(stats_);
}

AcousticModel::FftBlock AcousticModel::make_block(nn::Initializer& init, const std::string& name,
                                                  int dim, int heads) {
  FftBlock b;
  b.attention = nn::MultiHeadAttention(store_, init, name + ".attention", dim, heads);
  b.attention_norm = nn::LayerNorm(store_, name + ".attention_norm", dim);
  b.ff_gate = nn::Conv1d(store_, init, name + ".ff_gate", dim, 2 * config_.ff_filter,
                         config_.ff_kernel);
  b.ff_out = nn::Conv1d(store_, init, name + ".ff_out", config_.ff_filter, dim, 1);
  b.ff_norm = nn::LayerNorm(store_, name + ".ff_norm", dim);
  return b;
}

AcousticModel::VariancePredictor AcousticModel::make_predictor(nn::Initializer& init,
                                                               const std::string& name, int dim) {
  VariancePredictor p;
  const int f = config_.variance_filter;
  p.conv1 = nn::Conv1d(store_, init, name + ".conv1", dim, f, config_.variance_kernel);
  p.norm1 = nn::LayerNorm(store_, name + ".norm1", f);
  p.conv2 = nn::Conv1d(store_, init, name + ".conv2", f, f, config_.variance_kernel);
  p.norm2 = nn::LayerNorm(store_, name + ".norm2", f);
  p.head = nn::Linear(store_, init, name + ".head", f, 1);
  return p;
}

void AcousticModel::set_stats(const VarianceStats& stats) {
  if (!(stats.pitch_std > 0.0) || !(stats.energy_std > 0.0)) {
    throw ConfigError("variance statistics need positive standard deviations");
  }
  if (!(stats.pitch_min <= stats.pitch_max) || !(stats.energy_min <= stats.energy_max)) {
    throw ConfigError("variance statistics need min <= max");
  }
  stats_ = stats;
  pitch_bounds_ = bucket_boundaries(stats.pitch_min, stats.pitch_max, config_.n_bins);
  energy_bounds_ = bucket_boundaries(stats.energy_min, stats.energy_max, config_.n_bins);
}

nn::Var AcousticModel::embed_phonemes(const std::vector<int>& ids) const {
  std::vector<nn::Index> idx;
  idx.reserve(ids.size());
  for (int id : ids) {
    if (id < 0 || id >= config_.n_symbols) {
      throw IndexError("phoneme id " + std::to_string(id) + " outside vocabulary of " +
                       std::to_string(config_.n_symbols));
    }
    idx.push_back(id);
  }
  if (idx.empty()) return nn::constant(nn::Matrix::Zero(0, config_.encoder_hidden));
  return add_positions(phonemes_.forward(idx));
}

nn::Var AcousticModel::run_block(const FftBlock& block, const nn::Var& x, nn::Index valid,
                                 double p, const nn::ForwardContext& ctx,
                                 std::vector<nn::Matrix>* attention) const {
  nn::Var a = block.attention.forward(x, valid, attention);
  a = nn::dropout(a, p, ctx.training, ctx.rng);
  nn::Var h = nn::mask_rows(block.attention_norm.forward(a + x), valid);
  nn::Var f = nn::glu(block.ff_gate.forward(h));
  f = nn::dropout(f, p, ctx.training, ctx.rng);
  f = block.ff_out.forward(f);
  f = nn::dropout(f, p, ctx.training, ctx.rng);
  return nn::mask_rows(block.ff_norm.forward(f + h), valid);
}

nn::Var AcousticModel::encode(const nn::Var& x, nn::Index valid, const nn::ForwardContext& ctx,
                              std::vector<nn::Matrix>* attention) const {
  if (x.rows() == 0) return x;
  nn::Var h = nn::mask_rows(x, valid);
  for (const auto& block : encoder_) {
    std::vector<nn::Matrix> weights;
    h = run_block(block, h, valid, config_.encoder_dropout, ctx,
                  attention != nullptr ? &weights : nullptr);
    if (attention != nullptr) {
      for (auto& w : weights) attention->push_back(std::move(w));
    }
  }
  return h;
}

nn::Var AcousticModel::inject_condition(const nn::Var& h, int speaker, int emotion) const {
  nn::Var out = h;
  if (config_.multi_speaker) {
    if (speaker < 0 || speaker >= config_.n_speakers) {
      throw IndexError("speaker id " + std::to_string(speaker) + " outside table of " +
                       std::to_string(config_.n_speakers));
    }
    const nn::Index s = speaker;
    out = nn::add_row(out, speakers_.forward(std::span<const nn::Index>(&s, 1)));
  }
  if (config_.multi_emotion) {
    if (emotion < 0 || emotion >= config_.n_emotion) {
      throw IndexError("emotion id " + std::to_string(emotion) + " outside table of " +
                       std::to_string(config_.n_emotion));
    }
    const nn::Index e = emotion;
    const nn::Var row = nn::relu(emotion_linear_.forward(
        emotions_.forward(std::span<const nn::Index>(&e, 1))));
    out = nn::add_row(out, row);
  }
  return out;
}

nn::Var AcousticModel::run_predictor(const VariancePredictor& p, const nn::Var& h,
                                     nn::Index valid, const nn::ForwardContext& ctx) const {
  const double rate = config_.variance_dropout;
  nn::Var x = nn::mask_rows(h, valid);
  x = nn::dropout(p.norm1.forward(nn::relu(p.conv1.forward(x))), rate, ctx.training, ctx.rng);
  x = nn::mask_rows(x, valid);
  x = nn::dropout(p.norm2.forward(nn::relu(p.conv2.forward(x))), rate, ctx.training, ctx.rng);
  return nn::mask_rows(p.head.forward(x), valid);
}

AcousticModel::Prediction AcousticModel::predict_variance(
    const nn::Var& h, nn::Index valid, const VarianceTargets* targets,
    const nn::ForwardContext& ctx, const InferenceControls& controls) const {
  if (valid <= 0) throw ShapeError("variance adaptor needs at least one phoneme");
  if (valid > h.rows()) throw ShapeError("valid length exceeds the encoder sequence");
  const auto n = static_cast<std::size_t>(valid);
  if (targets != nullptr) {
    if (targets->durations.size() != n || static_cast<std::size_t>(targets->pitch.size()) != n ||
        static_cast<std::size_t>(targets->energy.size()) != n) {
      throw ShapeError("variance targets cover " + std::to_string(targets->durations.size()) +
                       " phonemes, sequence has " + std::to_string(n));
    }
  }

  Prediction p;
  p.outputs.log_durations = run_predictor(duration_, h, valid, ctx);
  p.outputs.pitch = run_predictor(pitch_, h, valid, ctx);
  p.outputs.energy = run_predictor(energy_, h, valid, ctx);
  if (targets != nullptr) {
    p.outputs.durations = targets->durations;
    p.pitch = targets->pitch;
    p.energy = targets->energy;
  } else if (!controls.durations.empty()) {
    if (controls.durations.size() != n) {
      throw ShapeError("duration override covers " + std::to_string(controls.durations.size()) +
                       " phonemes, sequence has " + std::to_string(n));
    }
    p.outputs.durations = controls.durations;
    p.pitch = p.outputs.pitch.value().col(0).head(valid);
    p.energy = p.outputs.energy.value().col(0).head(valid);
  } else {
    auto& d = p.outputs.durations;
    d = durations_from_log(p.outputs.log_durations.value().col(0).head(valid),
                           controls.duration_scale);
    // An all-silent prediction would leave the decoder nothing to work on.
    if (std::accumulate(d.begin(), d.end(), 0) == 0) std::fill(d.begin(), d.end(), 1);
    p.pitch = p.outputs.pitch.value().col(0).head(valid);
    p.energy = p.outputs.energy.value().col(0).head(valid);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (p.outputs.durations[i] < 0) {
      throw ShapeError("negative duration at phoneme " + std::to_string(i));
    }
  }
  return p;
}

nn::Var AcousticModel::regulate(const nn::Var& h, const Prediction& p,
                                nn::Index frames_out) const {
  // Length regulation and bucket lookups share one repeated index.
  std::vector<nn::Index> expand;
  std::vector<nn::Index> pitch_bins;
  std::vector<nn::Index> energy_bins;
  const auto& durations = p.outputs.durations;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const nn::Index pb = bucketize(p.pitch(row), pitch_bounds_);
    const nn::Index eb = bucketize(p.energy(row), energy_bounds_);
    expand.insert(expand.end(), static_cast<std::size_t>(durations[i]), row);
    pitch_bins.insert(pitch_bins.end(), static_cast<std::size_t>(durations[i]), pb);
    energy_bins.insert(energy_bins.end(), static_cast<std::size_t>(durations[i]), eb);
  }
  const auto frames = static_cast<nn::Index>(expand.size());
  const auto rows = static_cast<std::size_t>(std::max(frames, frames_out));
  expand.resize(rows, 0);
  pitch_bins.resize(rows, 0);
  energy_bins.resize(rows, 0);
  nn::Var expanded = nn::gather_rows(h, expand) + pitch_embedding_.forward(pitch_bins) +
                     energy_embedding_.forward(energy_bins);
  return nn::mask_rows(expanded, frames);
}

std::pair<nn::Var, VarianceOutputs> AcousticModel::variance_adapt(
    const nn::Var& h, nn::Index valid, const VarianceTargets* targets,
    const nn::ForwardContext& ctx, const InferenceControls& controls,
    nn::Index frames_out) const {
  Prediction p = predict_variance(h, valid, targets, ctx, controls);
  nn::Var expanded = regulate(h, p, frames_out);
  return {std::move(expanded), std::move(p.outputs)};
}

std::pair<nn::Var, nn::Var> AcousticModel::decode_mel(const nn::Var& expanded,
                                                      nn::Index valid_frames,
                                                      const nn::ForwardContext& ctx) const {
  if (expanded.rows() == 0) throw ShapeError("mel decoder needs at least one frame");
  nn::Var h = nn::mask_rows(add_positions(expanded), valid_frames);
  for (const auto& block : decoder_) {
    h = run_block(block, h, valid_frames, config_.decoder_dropout, ctx, nullptr);
  }
  nn::Var before = nn::mask_rows(mel_linear_.forward(h), valid_frames);
  nn::Var r = before;
  for (std::size_t l = 0; l < postnet_.size(); ++l) {
    r = postnet_[l].forward(r);
    if (l + 1 < postnet_.size()) r = nn::tanh(r);
    r = nn::mask_rows(nn::dropout(r, config_.postnet_dropout, ctx.training, ctx.rng), valid_frames);
  }
  nn::Var after = postnet_.empty() ? before : before + r;
  return {before, after};
}

AcousticOutput AcousticModel::forward(const AcousticInput& input, const VarianceTargets* targets,
                                      const nn::ForwardContext& ctx,
                                      const InferenceControls& controls) const {
  const nn::Var x = embed_phonemes(input.phoneme_ids);
  const auto n = static_cast<nn::Index>(input.phoneme_ids.size());
  const nn::Var h = inject_condition(encode(x, n, ctx), input.speaker, input.emotion);
  auto [expanded, variance] = variance_adapt(h, n, targets, ctx, controls);
  AcousticOutput out;
  out.frames = expanded.rows();
  auto [before, after] = decode_mel(expanded, out.frames, ctx);
  out.variance = std::move(variance);
  out.mel_before = std::move(before);
  out.mel_after = std::move(after);
  return out;
}

std::vector<AcousticOutput> AcousticModel::forward_batch(
    const std::vector<AcousticInput>& inputs, const std::vector<VarianceTargets>* targets,
    const nn::ForwardContext& ctx, const InferenceControls& controls) const {
  if (targets != nullptr && targets->size() != inputs.size()) {
    throw ShapeError("batch has " + std::to_string(inputs.size()) + " inputs but " +
                     std::to_string(targets->size()) + " targets");
  }
  std::size_t max_len = 0;
  nn::Index max_frames = 0;
  for (const auto& in : inputs) max_len = std::max(max_len, in.phoneme_ids.size());

  // Encoder and variance predictors over the padded phoneme batch.
  std::vector<nn::Var> hidden;
  std::vector<Prediction> predictions;
  for (std::size_t b = 0; b < inputs.size(); ++b) {
    std::vector<int> ids = inputs[b].phoneme_ids;
    const auto n = static_cast<nn::Index>(ids.size());
    ids.resize(max_len, text::PhonemeVocabulary::kPad);
    hidden.push_back(inject_condition(encode(embed_phonemes(ids), n, ctx), inputs[b].speaker,
                                      inputs[b].emotion));
    predictions.push_back(predict_variance(
        hidden.back(), n, targets != nullptr ? &(*targets)[b] : nullptr, ctx, controls));
    const auto& d = predictions.back().outputs.durations;
    max_frames = std::max(max_frames, std::accumulate(d.begin(), d.end(), nn::Index{0}));
  }

  // Decoder over the padded frame batch.
  std::vector<AcousticOutput> outputs;
  for (std::size_t b = 0; b < inputs.size(); ++b) {
    const auto n = static_cast<nn::Index>(inputs[b].phoneme_ids.size());
    auto& var = predictions[b].outputs;
    AcousticOutput out;
    out.frames = std::accumulate(var.durations.begin(), var.durations.end(), nn::Index{0});
    auto [before, after] = decode_mel(regulate(hidden[b], predictions[b], max_frames), out.frames,
                                      ctx);
    out.mel_before = take_rows(before, out.frames);
    out.mel_after = take_rows(after, out.frames);
    out.variance.log_durations = take_rows(var.log_durations, n);
    out.variance.pitch = take_rows(var.pitch, n);
    out.variance.energy = take_rows(var.energy, n);
    out.variance.durations = std::move(var.durations);
    outputs.push_back(std::move(out));
  }
  return outputs;
}

void save_acoustic(const std::filesystem::path& path, const AcousticModel& model) {
  io::Checkpoint ckpt;
  ckpt.kind = kCheckpointKind;
  ckpt.config = {{"model", model.config()}, {"stats", model.stats()}};
  ckpt.tensors = model.parameters().snapshot();
  io::save_checkpoint(path, ckpt);
}

std::shared_ptr<AcousticModel> load_acoustic(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ModelNotLoaded("acoustic checkpoint not found: " + path.string());
  }
  const auto ckpt = io::load_checkpoint(path);
  if (ckpt.kind != kCheckpointKind) {
    throw WeightMismatch(path.string() + " holds a '" + ckpt.kind + "' checkpoint");
  }
  AcousticConfig config;
  VarianceStats stats;
  try {
    config = ckpt.config.at("model").get<AcousticConfig>();
    stats = ckpt.config.at("stats").get<VarianceStats>();
  } catch (const nlohmann::json::exception& e) {
    throw WeightMismatch(path.string() + ": bad acoustic header: " + e.what());
  }
  auto model = std::make_shared<AcousticModel>(config);
  model->set_stats(stats);
  model->parameters().load(ckpt.tensors);
  return model;
}

}  // namespace emotts::acoustic
