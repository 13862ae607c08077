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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "emotts/dsp/audio_config.h"
#include "emotts/vocoder/griffin_lim.h"
#include "emotts/vocoder/hifigan.h"
#include "emotts/waveform.h"

namespace emotts::vocoder {

// Mel (frames x n_mels, natural-log magnitudes) to audio. Implementations
// are immutable after construction and safe to share across threads.
class Vocoder {
 public:
  virtual ~Vocoder() = default;
  // frames * hop_length samples at the configured rate. `seed` fixes any
  // stochastic initialisation so repeated calls are identical.
  virtual Waveform synthesize(const Eigen::MatrixXd& mel, std::uint64_t seed = 0) const = 0;
  virtual std::string name() const = 0;
  virtual int sample_rate() const = 0;
  virtual int hop_length() const = 0;
};

class GriffinLimVocoder : public Vocoder {
 public:
  explicit GriffinLimVocoder(const dsp::AudioConfig& audio, int iterations = 32);
  Waveform synthesize(const Eigen::MatrixXd& mel, std::uint64_t seed = 0) const override;
  std::string name() const override { return "griffin_lim"; }
  int sample_rate() const override { return audio_.sample_rate; }
  int hop_length() const override { return audio_.hop_length; }

 private:
  dsp::AudioConfig audio_;
  int iterations_;
};

// Runs the generator in float.
class HifiganVocoder : public Vocoder {
 public:
  HifiganVocoder(const GeneratorConfig& config, const GeneratorWeights<double>& weights,
                 int sample_rate = 22050);
  Waveform synthesize(const Eigen::MatrixXd& mel, std::uint64_t seed = 0) const override;
  std::string name() const override { return "neural"; }
  int sample_rate() const override { return sample_rate_; }
  int hop_length() const override { return config_.hop_length(); }

 private:
  GeneratorConfig config_;
  GeneratorWeights<float> weights_;
  int sample_rate_;
};

// kind "griffin_lim" ignores `checkpoint`; kind "neural" loads it (throws
// ModelNotLoaded if absent) and checks the hop length. Other kinds are a
// ConfigError.
std::shared_ptr<const Vocoder> make_vocoder(const std::string& kind, const dsp::AudioConfig& audio,
                                            const std::filesystem::path& checkpoint = {});

}  // namespace emotts::vocoder
