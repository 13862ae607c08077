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

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "emotts/emotion.h"
#include "emotts/nn/layers.h"
#include "emotts/nn/parameters.h"
#include "emotts/text/tokenizer.h"

namespace emotts::emoclass {

struct ClassifierConfig {
  int vocab_size = 0;
  int layers = 2;
  int heads = 2;
  int hidden = 64;
  int feed_forward = 128;
  double dropout = 0.1;
  int max_positions = text::kClassifierSequenceLength;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ClassifierConfig, vocab_size, layers, heads,
                                                hidden, feed_forward, dropout,
                                                max_positions, seed)

struct ClassifierOutput {
  std::array<double, kNumEmotions> probs{};
  Eigen::Matrix<double, kNumEmotions, 1> logits;
  EmotionLabel predicted;
  // Final hidden state at the classification token (position 0).
  Eigen::VectorXd pooled;
};

// Numerically stable softmax over the five logits.
std::array<double, kNumEmotions> softmax5(const Eigen::Matrix<double, kNumEmotions, 1>& logits);
// Arg-max with the lowest id winning ties.
EmotionLabel argmax_label(const std::array<double, kNumEmotions>& probs);

// Small post-LN transformer encoder over word tokens with learned positions
// and a LayerNorm -> dense -> tanh -> dropout -> dense(5) head on the
// classification-token state. Computation is restricted to the unmasked
// prefix, so padding never influences the result.
class TransformerClassifier {
 public:
  explicit TransformerClassifier(const ClassifierConfig& config);

  const ClassifierConfig& config() const { return config_; }
  nn::ParameterStore& parameters() { return store_; }
  const nn::ParameterStore& parameters() const { return store_; }

  struct Forward {
    nn::Var logits;  // 1 x 5
    nn::Var pooled;  // 1 x hidden
  };
  Forward forward(const text::TokenSequence& tokens, const nn::ForwardContext& ctx) const;

  // Evaluation-mode inference; deterministic and thread-safe.
  ClassifierOutput classify(const text::TokenSequence& tokens) const;

  // Cross-entropy of one example; differentiable w.r.t. the parameters.
  nn::Var loss(const text::TokenSequence& tokens, int label, const nn::ForwardContext& ctx) const;

 private:
  struct Layer {
    nn::MultiHeadAttention attention;
    nn::LayerNorm attention_norm;
    nn::Linear ff_in;
    nn::Linear ff_out;
    nn::LayerNorm ff_norm;
  };

  ClassifierConfig config_;
  nn::ParameterStore store_;
  nn::Embedding tokens_;
  nn::Embedding positions_;
  nn::LayerNorm embed_norm_;
  std::vector<Layer> layers_;
  nn::LayerNorm head_norm_;
  nn::Linear head_dense_;
  nn::Linear head_out_;
};

// Text -> emotion distribution. The built-in transformer is one
// implementation; pretrained encoders plug in through FunctionBackend.
class EmotionClassifier {
 public:
  virtual ~EmotionClassifier() = default;
  virtual ClassifierOutput classify_text(std::string_view text) const = 0;
  virtual std::string backend_name() const = 0;
};

class TransformerBackend : public EmotionClassifier {
 public:
  TransformerBackend(std::shared_ptr<const TransformerClassifier> model,
                     text::TokenVocabulary vocab);
  ClassifierOutput classify_text(std::string_view text) const override;
  std::string backend_name() const override { return "transformer"; }

  const TransformerClassifier& model() const { return *model_; }
  const text::TokenVocabulary& vocabulary() const { return vocab_; }

 private:
  std::shared_ptr<const TransformerClassifier> model_;
  text::TokenVocabulary vocab_;
};

// Adapter for external encoders: the callable maps text to five
// probabilities and a pooled vector.
class FunctionBackend : public EmotionClassifier {
 public:
  using Fn = std::function<std::pair<std::array<double, kNumEmotions>, Eigen::VectorXd>(
      std::string_view)>;
  FunctionBackend(std::string name, Fn fn);
  ClassifierOutput classify_text(std::string_view text) const override;
  std::string backend_name() const override { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

// Checkpoint kind "emotion_classifier": config and vocabulary in the header.
void save_classifier(const std::filesystem::path& path, const TransformerClassifier& model,
                     const text::TokenVocabulary& vocab);
std::shared_ptr<TransformerBackend> load_classifier(const std::filesystem::path& path);

// Holds the active backend; predict_emotion_id throws ModelNotLoaded until
// one is set.
class EmotionPredictor {
 public:
  EmotionPredictor() = default;
  explicit EmotionPredictor(std::shared_ptr<const EmotionClassifier> backend)
      : backend_(std::move(backend)) {}

  bool loaded() const { return backend_ != nullptr; }
  void set_backend(std::shared_ptr<const EmotionClassifier> backend) { backend_ = std::move(backend); }
  const EmotionClassifier& backend() const;

  ClassifierOutput classify(std::string_view text) const { return backend().classify_text(text); }
  int predict_emotion_id(std::string_view text) const { return classify(text).predicted.id; }

 private:
  std::shared_ptr<const EmotionClassifier> backend_;
};

}  // namespace emotts::emoclass
