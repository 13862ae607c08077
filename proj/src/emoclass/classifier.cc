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

#include "emotts/emoclass/classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"
#include "emotts/nn/ops.h"

namespace emotts::emoclass {

namespace {

constexpr const char* kCheckpointKind = "emotion_classifier";
constexpr double kEmbeddingStddev = 0.02;

// Length of the leading run of ones in the attention mask; at least 1 so the
// classification token always takes part.
int mask_prefix(const text::TokenSequence& tokens) {
  int n = 0;
  while (n < static_cast<int>(tokens.attention_mask.size()) &&
         tokens.attention_mask[static_cast<std::size_t>(n)] != 0) {
    ++n;
  }
  return std::max(1, std::min(n, static_cast<int>(tokens.ids.size())));
}

}  // namespace

void ClassifierConfig::validate() const {
  if (vocab_size < 4) throw ConfigError("classifier vocab_size must cover the special tokens");
  if (layers < 1 || heads < 1 || hidden < 1 || feed_forward < 1) {
    throw ConfigError("classifier dimensions must be positive");
  }
  if (hidden % heads != 0) {
    throw ConfigError("classifier hidden size " + std::to_string(hidden) +
                      " is not divisible by " + std::to_string(heads) + " heads");
  }
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("classifier dropout must be in [0, 1)");
  if (max_positions < 2) throw ConfigError("classifier max_positions must be at least 2");
}

std::array<double, kNumEmotions> softmax5(const Eigen::Matrix<double, kNumEmotions, 1>& logits) {
  const double top = logits.maxCoeff();
  std::array<double, kNumEmotions> p{};
  double total = 0.0;
  for (int i = 0; i < kNumEmotions; ++i) {
    p[static_cast<std::size_t>(i)] = std::exp(logits(i) - top);
    total += p[static_cast<std::size_t>(i)];
  }
  for (double& v : p) v /= total;
  return p;
}

EmotionLabel argmax_label(const std::array<double, kNumEmotions>& probs) {
  int best = 0;
  for (int i = 1; i < kNumEmotions; ++i) {
    if (probs[static_cast<std::size_t>(i)] > probs[static_cast<std::size_t>(best)]) best = i;
  }
  return EmotionLabel{best};
}

TransformerClassifier::TransformerClassifier(const ClassifierConfig& config) : config_(config) {
  config_.validate();
  nn::Initializer init(config_.seed);
  const nn::Index d = config_.hidden;
  tokens_ = nn::Embedding(store_, init, "embed.tokens", config_.vocab_size, d, kEmbeddingStddev);
  positions_ =
      nn::Embedding(store_, init, "embed.positions", config_.max_positions, d, kEmbeddingStddev);
  embed_norm_ = nn::LayerNorm(store_, "embed.norm", d);
  for (int l = 0; l < config_.layers; ++l) {
    const std::string p = "layer" + std::to_string(l);
    Layer layer;
    layer.attention = nn::MultiHeadAttention(store_, init, p + ".attention", d, config_.heads);
    layer.attention_norm = nn::LayerNorm(store_, p + ".attention_norm", d);
    layer.ff_in = nn::Linear(store_, init, p + ".ff_in", d, config_.feed_forward);
    layer.ff_out = nn::Linear(store_, init, p + ".ff_out", config_.feed_forward, d);
    layer.ff_norm = nn::LayerNorm(store_, p + ".ff_norm", d);
    layers_.push_back(std::move(layer));
  }
  head_norm_ = nn::LayerNorm(store_, "head.norm", d);
  head_dense_ = nn::Linear(store_, init, "head.dense", d, d);
  head_out_ = nn::Linear(store_, init, "head.out", d, kNumEmotions);
}

TransformerClassifier::Forward TransformerClassifier::forward(
    const text::TokenSequence& tokens, const nn::ForwardContext& ctx) const {
  const int n = std::min(mask_prefix(tokens), config_.max_positions);
  std::vector<nn::Index> ids(static_cast<std::size_t>(n));
  std::vector<nn::Index> pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ids[static_cast<std::size_t>(i)] = tokens.ids[static_cast<std::size_t>(i)];
    pos[static_cast<std::size_t>(i)] = i;
  }
  const double p = config_.dropout;
  auto drop = [&](const nn::Var& x) { return nn::dropout(x, p, ctx.training, ctx.rng); };

  nn::Var x = tokens_.forward(ids) + positions_.forward(pos);
  x = drop(embed_norm_.forward(x));
  for (const auto& layer : layers_) {
    const nn::Var attended = layer.attention.forward(x, n);
    x = layer.attention_norm.forward(x + drop(attended));
    const nn::Var ff = layer.ff_out.forward(nn::gelu(layer.ff_in.forward(x)));
    x = layer.ff_norm.forward(x + drop(ff));
  }
  const std::vector<nn::Index> cls = {0};
  const nn::Var pooled = nn::gather_rows(x, cls);
  nn::Var h = nn::tanh(head_dense_.forward(head_norm_.forward(pooled)));
  return {head_out_.forward(drop(h)), pooled};
}

ClassifierOutput TransformerClassifier::classify(const text::TokenSequence& tokens) const {
  nn::NoGradGuard no_grad;
  const auto f = forward(tokens, nn::ForwardContext{});
  ClassifierOutput out;
  out.logits = f.logits.value().row(0).transpose();
  out.probs = softmax5(out.logits);
  out.predicted = argmax_label(out.probs);
  out.pooled = f.pooled.value().row(0).transpose();
  return out;
}

nn::Var TransformerClassifier::loss(const text::TokenSequence& tokens, int label,
                                    const nn::ForwardContext& ctx) const {
  if (label < 0 || label >= kNumEmotions) {
    throw DataError("label " + std::to_string(label) + " is outside the five-emotion set");
  }
  const auto f = forward(tokens, ctx);
  return nn::pick(nn::log_softmax_rows(f.logits), 0, label) * -1.0;
}

TransformerBackend::TransformerBackend(std::shared_ptr<const TransformerClassifier> model,
                                       text::TokenVocabulary vocab)
    : model_(std::move(model)), vocab_(std::move(vocab)) {
  if (model_ == nullptr) throw ModelNotLoaded("transformer backend needs a model");
  if (vocab_.size() != model_->config().vocab_size) {
    throw WeightMismatch("vocabulary has " + std::to_string(vocab_.size()) +
                         " tokens but the classifier expects " +
                         std::to_string(model_->config().vocab_size));
  }
}

ClassifierOutput TransformerBackend::classify_text(std::string_view text) const {
  return model_->classify(text::tokenize_for_classifier(text, vocab_));
}

FunctionBackend::FunctionBackend(std::string name, Fn fn)
    : name_(std::move(name)), fn_(std::move(fn)) {
  if (!fn_) throw ModelNotLoaded("function backend '" + name_ + "' has no callable");
}

ClassifierOutput FunctionBackend::classify_text(std::string_view text) const {
  auto [probs, pooled] = fn_(text);
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw SynthesisError(name_ + ": invalid probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) throw SynthesisError(name_ + ": probabilities do not sum to 1");
  ClassifierOutput out;
  out.probs = probs;
  for (int i = 0; i < kNumEmotions; ++i) {
    out.logits(i) = std::log(std::max(probs[static_cast<std::size_t>(i)], 1e-300));
  }
  out.predicted = argmax_label(probs);
  out.pooled = std::move(pooled);
  return out;
}

void save_classifier(const std::filesystem::path& path, const TransformerClassifier& model,
                     const text::TokenVocabulary& vocab) {
  io::Checkpoint ckpt;
  ckpt.kind = kCheckpointKind;
  ckpt.config = {{"model", model.config()}, {"vocabulary", vocab.tokens()}};
  ckpt.tensors = model.parameters().snapshot();
  io::save_checkpoint(path, ckpt);
}

std::shared_ptr<TransformerBackend> load_classifier(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ModelNotLoaded("classifier checkpoint not found: " + path.string());
  }
  const auto ckpt = io::load_checkpoint(path);
  if (ckpt.kind != kCheckpointKind) {
    throw WeightMismatch(path.string() + " holds a '" + ckpt.kind + "' checkpoint");
  }
  ClassifierConfig config;
  std::vector<std::string> tokens;
  try {
    config = ckpt.config.at("model").get<ClassifierConfig>();
    tokens = ckpt.config.at("vocabulary").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw WeightMismatch(path.string() + ": bad classifier header: " + e.what());
  }
  auto model = std::make_shared<TransformerClassifier>(config);
  model->parameters().load(ckpt.tensors);
  return std::make_shared<TransformerBackend>(std::move(model),
                                              text::TokenVocabulary(std::move(tokens)));
}

const EmotionClassifier& EmotionPredictor::backend() const {
  if (backend_ == nullptr) throw ModelNotLoaded("no emotion classifier is loaded");
  return *backend_;
}

}  // namespace emotts::emoclass
