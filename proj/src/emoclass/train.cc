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

#include "emotts/emoclass/train.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"
#include "emotts/nn/ops.h"

namespace emotts::emoclass {

double macro_f1(const std::vector<int>& predicted, const std::vector<int>& gold) {
  if (predicted.size() != gold.size()) throw ShapeError("macro_f1: length mismatch");
  std::set<int> classes(gold.begin(), gold.end());
  classes.insert(predicted.begin(), predicted.end());
  if (classes.empty()) return 0.0;
  double total = 0.0;
  for (int c : classes) {
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const bool p = predicted[i] == c;
      const bool g = gold[i] == c;
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
    const int denom = 2 * tp + fp + fn;
    total += denom == 0 ? 0.0 : 2.0 * tp / denom;
  }
  return total / static_cast<double>(classes.size());
}

ClassifierTrainResult train_classifier(const std::vector<LabeledText>& data,
                                       const ClassifierTrainConfig& config) {
  if (data.empty()) throw DataError("classifier training set is empty");
  std::set<int> classes;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int label = data[i].label;
    if (label < 0 || label >= kNumEmotions) {
      throw DataError("example " + std::to_string(i) + " has label " + std::to_string(label) +
                      " outside the five-emotion set");
    }
    classes.insert(label);
  }
  if (classes.size() < 2) throw DataError("classifier training needs at least two classes");
  if (config.epochs < 1 || config.batch_size < 1) {
    throw ConfigError("epochs and batch_size must be positive");
  }

  std::vector<std::string> texts;
  for (const auto& ex : data) texts.push_back(ex.text);
  ClassifierTrainResult result;
  result.vocab = text::TokenVocabulary::build(texts, config.vocab_min_count, config.vocab_max_size);
  ClassifierConfig model_config = config.model;
  model_config.vocab_size = result.vocab.size();
  model_config.seed = config.seed;
  result.model = std::make_shared<TransformerClassifier>(model_config);
  auto& model = *result.model;

  std::vector<text::TokenSequence> sequences;
  std::vector<int> gold;
  for (const auto& ex : data) {
    sequences.push_back(text::tokenize_for_classifier(ex.text, result.vocab));
    gold.push_back(ex.label);
  }

  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  nn::Adam adam(model.parameters(), config.adam);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const nn::ForwardContext train_ctx{true, &rng};

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      model.parameters().zero_grad();
      std::vector<nn::Var> terms;
      for (std::size_t k = start; k < end; ++k) {
        terms.push_back(model.loss(sequences[order[k]], gold[order[k]], train_ctx));
      }
      const nn::Var batch_loss = nn::add_scalars(terms) * (1.0 / static_cast<double>(end - start));
      if (!std::isfinite(batch_loss.scalar())) {
        throw NonFiniteLoss("classifier loss became non-finite at epoch " + std::to_string(epoch));
      }
      batch_loss.backward();
      nn::clip_grad_norm(model.parameters(), config.grad_clip);
      adam.step(config.learning_rate);
      epoch_loss += batch_loss.scalar() * static_cast<double>(end - start);
    }

    std::vector<int> predicted;
    for (const auto& seq : sequences) predicted.push_back(model.classify(seq).predicted.id);
    int correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) correct += predicted[i] == gold[i];
    result.history.push_back({epoch, epoch_loss / static_cast<double>(data.size()),
                              macro_f1(predicted, gold),
                              static_cast<double>(correct) / static_cast<double>(gold.size())});
  }
  return result;
}

std::vector<LabeledText> load_labeled_tsv(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw MissingAsset("labeled text file not found: " + path.string());
  const std::string content = io::read_text(path);
  std::vector<LabeledText> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected text<TAB>emotion");
    }
    const auto label = EmotionLabel::find(line.substr(tab + 1));
    if (!label) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": unknown emotion '" +
                      line.substr(tab + 1) + "'");
    }
    out.push_back({line.substr(0, tab), label->id});
  }
  return out;
}

}  // namespace emotts::emoclass
