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

#include "emotts/vocoder/vocoder.h"

#include "emotts/errors.h"

namespace emotts::vocoder {

GriffinLimVocoder::GriffinLimVocoder(const dsp::AudioConfig& audio, int iterations)
    : audio_(audio), iterations_(iterations) {
  if (iterations < 0) throw ConfigError("griffin_lim iterations must be non-negative");
}

Waveform GriffinLimVocoder::synthesize(const Eigen::MatrixXd& mel, std::uint64_t seed) const {
  Waveform w;
  w.sample_rate = audio_.sample_rate;
  w.samples = griffin_lim<double>(mel, audio_, GriffinLimOptions{iterations_, seed});
  return w;
}

HifiganVocoder::HifiganVocoder(const GeneratorConfig& config,
                               const GeneratorWeights<double>& weights, int sample_rate)
    : config_(config), weights_(weights.cast<float>()), sample_rate_(sample_rate) {
  config_.validate();
}

Waveform HifiganVocoder::synthesize(const Eigen::MatrixXd& mel, std::uint64_t) const {
  Waveform w;
  w.sample_rate = sample_rate_;
  w.samples = hifigan_generate<float>(mel.cast<float>(), weights_, config_).cast<double>();
  return w;
}

std::shared_ptr<const Vocoder> make_vocoder(const std::string& kind, const dsp::AudioConfig& audio,
                                            const std::filesystem::path& checkpoint) {
  if (kind == "griffin_lim") return std::make_shared<GriffinLimVocoder>(audio);
  if (kind == "neural") {
    auto [cfg, weights] = load_generator(checkpoint);
    cfg.validate(audio.hop_length);
    if (cfg.n_mels != audio.n_mels) {
      throw ConfigError("vocoder expects " + std::to_string(cfg.n_mels) + " mel bins, audio config has " +
                        std::to_string(audio.n_mels));
    }
    return std::make_shared<HifiganVocoder>(cfg, weights, audio.sample_rate);
  }
  throw ConfigError("unknown vocoder '" + kind + "' (expected griffin_lim or neural)");
}

}  // namespace emotts::vocoder
