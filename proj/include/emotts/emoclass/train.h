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
#include <string>
#include <vector>

#include "emotts/emoclass/classifier.h"
#include "emotts/nn/optim.h"

namespace emotts::emoclass {

struct LabeledText {
  std::string text;
  int label = 0;  // emotion id; must lie in 0-4
};

struct ClassifierTrainConfig {
  ClassifierConfig model;  // vocab_size is filled from the learned vocabulary
  int epochs = 50;
  int batch_size = 16;
  double learning_rate = 1e-3;
  nn::AdamConfig adam{0.9, 0.999, 1e-8, 0.0};
  double grad_clip = 1.0;
  int vocab_min_count = 1;
  int vocab_max_size = 30000;
  std::uint64_t seed = 0;
};

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;      // mean training-mode cross-entropy over the epoch
  double macro_f1 = 0.0;  // evaluation-mode, on the training set
  double accuracy = 0.0;
};

struct ClassifierTrainResult {
  std::shared_ptr<TransformerClassifier> model;
  text::TokenVocabulary vocab;
  std::vector<EpochMetrics> history;
};

// Mini-batch Adam on cross-entropy with uniform class weights. Throws
// DataError on an empty dataset, a label outside 0-4, or fewer than two
// distinct classes. Deterministic for a fixed seed.
ClassifierTrainResult train_classifier(const std::vector<LabeledText>& data,
                                       const ClassifierTrainConfig& config);

// Unweighted mean of per-class F1 over the classes present in either list.
double macro_f1(const std::vector<int>& predicted, const std::vector<int>& gold);

// "text<TAB>emotion-name" per line; '#' comment lines and blanks skipped.
// Unknown emotion names raise DataError with the line number.
std::vector<LabeledText> load_labeled_tsv(const std::filesystem::path& path);

}  // namespace emotts::emoclass
