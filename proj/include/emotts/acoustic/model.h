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

#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "emotts/emotion.h"
#include "emotts/nn/layers.h"
#include "emotts/nn/parameters.h"

namespace emotts::acoustic {

struct AcousticConfig {
  int n_symbols = 87;  // phoneme inventory size
  int encoder_layers = 4;
  int encoder_heads = 2;
  int encoder_hidden = 256;
  int decoder_layers = 6;
  int decoder_heads = 2;
  int decoder_hidden = 256;
  // FFT-block feed-forward: gated conv (kernel ff_kernel) then conv kernel 1.
  int ff_filter = 1024;
  int ff_kernel = 9;
  double encoder_dropout = 0.2;
  double decoder_dropout = 0.2;
  int variance_filter = 256;
  int variance_kernel = 3;
  double variance_dropout = 0.5;
  int n_bins = 256;
  int n_mels = 80;
  int postnet_layers = 5;
  int postnet_channels = 256;
  int postnet_kernel = 5;
  double postnet_dropout = 0.5;
  int n_speakers = 4;
  int n_emotion = kNumEmotions;
  bool multi_speaker = true;
  bool multi_emotion = true;
  // Initial duration-predictor bias; exp(b) - 1 frames per phoneme untrained.
  double duration_bias = 1.791759469228055;  // log(6)
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError

  // A small configuration for tests and toy training.
  static AcousticConfig tiny(int hidden = 8, int n_mels = 80);
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    AcousticConfig, n_symbols, encoder_layers, encoder_heads, encoder_hidden, decoder_layers,
    decoder_heads, decoder_hidden, ff_filter, ff_kernel, encoder_dropout, decoder_dropout,
    variance_filter, variance_kernel, variance_dropout, n_bins, n_mels, postnet_layers,
    postnet_channels, postnet_kernel, postnet_dropout, n_speakers, n_emotion, multi_speaker,
    multi_emotion, duration_bias, seed)

// Per-corpus pitch/energy statistics. Predictors work on z-scored values;
// bucket boundaries span the normalised [min, max].
struct VarianceStats {
  double pitch_mean = 0.0, pitch_std = 1.0, pitch_min = -3.0, pitch_max = 3.0;
  double energy_mean = 0.0, energy_std = 1.0, energy_min = -3.0, energy_max = 3.0;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VarianceStats, pitch_mean, pitch_std, pitch_min,
                                                pitch_max, energy_mean, energy_std, energy_min,
                                                energy_max)

// n_bins - 1 evenly spaced boundaries over [lo, hi].
Eigen::VectorXd bucket_boundaries(double lo, double hi, int n_bins);
// Index i with boundaries[i-1] < v <= boundaries[i]; in [0, boundaries.size()].
int bucketize(double value, const Eigen::VectorXd& boundaries);

// Inference-time duration rule: max(0, round(exp(D) - 1)) scaled by `scale`.
std::vector<int> durations_from_log(const Eigen::VectorXd& log_durations, double scale = 1.0);

// Ground-truth variance targets for teacher forcing (normalised pitch and
// energy, one value per phoneme).
struct VarianceTargets {
  std::vector<int> durations;
  Eigen::VectorXd pitch;
  Eigen::VectorXd energy;
};

struct VarianceOutputs {
  nn::Var log_durations;  // n x 1
  nn::Var pitch;          // n x 1
  nn::Var energy;         // n x 1
  std::vector<int> durations;  // frames used by the length regulator
};

struct AcousticInput {
  std::vector<int> phoneme_ids;
  int speaker = 0;
  int emotion = 3;
};

struct InferenceControls {
  double duration_scale = 1.0;
  // When non-empty, used instead of the predicted frame counts (one per
  // phoneme); pitch and energy are still predicted.
  std::vector<int> durations;
};

struct AcousticOutput {
  VarianceOutputs variance;
  nn::Var mel_before;  // frames x n_mels
  nn::Var mel_after;   // frames x n_mels
  nn::Index frames = 0;
};

// Non-autoregressive acoustic model: phoneme embedding + positions ->
// FFT-block encoder -> speaker/emotion injection -> variance adaptor and
// length regulator -> FFT-block decoder -> mel projection -> postnet.
//
// Every stage accepts a row-padded sequence together with its valid length;
// padded rows are zeroed before each convolution and excluded as attention
// keys, so results on valid rows do not depend on the padding.
class AcousticModel {
 public:
  explicit AcousticModel(const AcousticConfig& config);

  const AcousticConfig& config() const { return config_; }
  nn::ParameterStore& parameters() { return store_; }
  const nn::ParameterStore& parameters() const { return store_; }
  const VarianceStats& stats() const { return stats_; }
  void set_stats(const VarianceStats& stats);

  // X = E[ids] + sinusoid positions. Throws IndexError for ids >= V.
  nn::Var embed_phonemes(const std::vector<int>& ids) const;
  // H = Encoder(X); per-layer, per-head attention weights when requested.
  nn::Var encode(const nn::Var& x, nn::Index valid, const nn::ForwardContext& ctx,
                 std::vector<nn::Matrix>* attention = nullptr) const;
  // H + speaker[s] + ReLU(W emotion[e] + b), broadcast over time.
  nn::Var inject_condition(const nn::Var& h, int speaker, int emotion) const;
  // Predicts D, P, E from H; expands with target durations when given, else
  // with durations_from_log(D). Bucket embeddings of the target (training)
  // or predicted (inference) pitch/energy are added after expansion.
  // `frames_out` pads the expanded sequence to at least that many rows.
  std::pair<nn::Var, VarianceOutputs> variance_adapt(
      const nn::Var& h, nn::Index valid, const VarianceTargets* targets,
      const nn::ForwardContext& ctx, const InferenceControls& controls = {},
      nn::Index frames_out = 0) const;
  // (M_before, M_after) from the expanded sequence.
  std::pair<nn::Var, nn::Var> decode_mel(const nn::Var& expanded, nn::Index valid_frames,
                                         const nn::ForwardContext& ctx) const;

  AcousticOutput forward(const AcousticInput& input, const VarianceTargets* targets,
                         const nn::ForwardContext& ctx, const InferenceControls& controls = {}) const;

  // Pads all inputs to a common length and runs them as one masked batch.
  // Outputs are cut back to each utterance's own phoneme and frame counts.
  std::vector<AcousticOutput> forward_batch(const std::vector<AcousticInput>& inputs,
                                            const std::vector<VarianceTargets>* targets,
                                            const nn::ForwardContext& ctx,
                                            const InferenceControls& controls = {}) const;

  double normalize_pitch(double hz) const { return (hz - stats_.pitch_mean) / stats_.pitch_std; }
  double normalize_energy(double e) const { return (e - stats_.energy_mean) / stats_.energy_std; }

 private:
  struct FftBlock {
    nn::MultiHeadAttention attention;
    nn::LayerNorm attention_norm;
    nn::Conv1d ff_gate;  // d -> 2F, kernel ff_kernel, followed by GLU
    nn::Conv1d ff_out;   // F -> d, kernel 1
    nn::LayerNorm ff_norm;
  };
  struct VariancePredictor {
    nn::Conv1d conv1, conv2;
    nn::LayerNorm norm1, norm2;
    nn::Linear head;
  };

  struct Prediction {
    VarianceOutputs outputs;
    Eigen::VectorXd pitch;   // values to bucketize (targets or predictions)
    Eigen::VectorXd energy;
  };

  Prediction predict_variance(const nn::Var& h, nn::Index valid, const VarianceTargets* targets,
                              const nn::ForwardContext& ctx,
                              const InferenceControls& controls) const;
  nn::Var regulate(const nn::Var& h, const Prediction& p, nn::Index frames_out) const;
  FftBlock make_block(nn::Initializer& init, const std::string& name, int dim, int heads);
  VariancePredictor make_predictor(nn::Initializer& init, const std::string& name, int dim);
  nn::Var run_block(const FftBlock& block, const nn::Var& x, nn::Index valid, double dropout,
                    const nn::ForwardContext& ctx, std::vector<nn::Matrix>* attention) const;
  nn::Var run_predictor(const VariancePredictor& p, const nn::Var& h, nn::Index valid,
                        const nn::ForwardContext& ctx) const;

  AcousticConfig config_;
  VarianceStats stats_;
  Eigen::VectorXd pitch_bounds_;
  Eigen::VectorXd energy_bounds_;
  nn::ParameterStore store_;
  nn::Embedding phonemes_;
  std::vector<FftBlock> encoder_;
  nn::Embedding speakers_;
  nn::Embedding emotions_;
  nn::Linear emotion_linear_;
  VariancePredictor duration_, pitch_, energy_;
  nn::Embedding pitch_embedding_;
  nn::Embedding energy_embedding_;
  std::vector<FftBlock> decoder_;
  nn::Linear mel_linear_;
  std::vector<nn::Conv1d> postnet_;
};

// Checkpoint kind "acoustic_model"; config {model, stats}.
void save_acoustic(const std::filesystem::path& path, const AcousticModel& model);
// Throws ModelNotLoaded if absent, WeightMismatch on a foreign or mis-shaped file.
std::shared_ptr<AcousticModel> load_acoustic(const std::filesystem::path& path);

}  // namespace emotts::acoustic
