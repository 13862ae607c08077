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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "emotts/emoclass/classifier.h"
#include "emotts/emoclass/train.h"
#include "emotts/emotion.h"
#include "emotts/errors.h"
#include "emotts/nn/ops.h"
#include "support/datasets.h"
#include "support/gradcheck.h"
#include "support/test_util.h"

namespace emotts::emoclass {
namespace {

ClassifierConfig tiny_config(int vocab = 16) {
  ClassifierConfig c;
  c.vocab_size = vocab;
  c.layers = 2;
  c.heads = 2;
  c.hidden = 8;
  c.feed_forward = 16;
  c.dropout = 0.0;
  c.max_positions = 128;
  c.seed = 3;
  return c;
}

text::TokenSequence sequence(std::vector<int> body) {
  text::TokenSequence s;
  s.ids.assign(128, text::TokenVocabulary::kPad);
  s.attention_mask.assign(128, 0);
  s.ids[0] = text::TokenVocabulary::kCls;
  for (std::size_t i = 0; i < body.size(); ++i) s.ids[i + 1] = body[i];
  s.ids[body.size() + 1] = text::TokenVocabulary::kSep;
  std::fill(s.attention_mask.begin(), s.attention_mask.begin() + static_cast<long>(body.size()) + 2, 1);
  return s;
}

void set_head(TransformerClassifier& model, double bias_for_3) {
  auto& store = model.parameters();
  nn::Var w = store.get("head.out.weight");
  nn::Var b = store.get("head.out.bias");
  w.mutable_value().setZero();
  b.mutable_value().setZero();
  b.mutable_value()(0, 3) = bias_for_3;
}

TEST(EmotionTable, FixedMapping) {
  EXPECT_EQ(emotions_json_text(),
            R"({"amused": 0, "anger": 1, "disgust": 2, "neutral": 3, "sleepiness": 4})");
  EXPECT_EQ(EmotionLabel::from_name("amused").id, 0);
  EXPECT_EQ(EmotionLabel::from_name("sleepiness").id, 4);
  EXPECT_EQ(EmotionLabel::from_id(1).name(), "anger");
  EXPECT_THROW(EmotionLabel::from_id(5), UnknownEmotion);
  EXPECT_THROW(EmotionLabel::from_name("happy"), UnknownEmotion);
  EXPECT_NO_THROW(verify_emotions_json(nlohmann::json::parse(emotions_json_text())));
  EXPECT_THROW(verify_emotions_json(nlohmann::json{{"amused", 1}}), ConfigError);
}

TEST(Classifier, HeadHasFiveOutputs) {
  TransformerClassifier model(tiny_config());
  EXPECT_EQ(model.parameters().get("head.out.weight").cols(), 5);
  EXPECT_EQ(model.parameters().get("head.out.bias").cols(), 5);
}

TEST(Classifier, ZeroLogitHeadIsUniformAndPicksLowestId) {
  TransformerClassifier model(tiny_config());
  set_head(model, 0.0);
  const auto out = model.classify(sequence({5, 6, 7}));
  for (double p : out.probs) EXPECT_DOUBLE_EQ(p, 0.2);
  EXPECT_EQ(out.predicted.id, 0);
}

TEST(Classifier, BiasedHeadPredictsThree) {
  TransformerClassifier model(tiny_config());
  set_head(model, 10.0);
  EXPECT_EQ(model.classify(sequence({5})).predicted.id, 3);
}

TEST(Classifier, ProbabilitiesSumToOneAndPooledIsPositionZero) {
  TransformerClassifier model(tiny_config());
  const auto seq = sequence({4, 9, 11, 12});
  const auto out = model.classify(seq);
  double total = 0.0;
  for (double p : out.probs) {
    EXPECT_GE(p, 0.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-6);
  EXPECT_EQ(out.pooled.size(), 8);
  nn::NoGradGuard g;
  const auto f = model.forward(seq, nn::ForwardContext{});
  EXPECT_EQ(f.pooled.value().row(0).transpose(), out.pooled);
}

TEST(Classifier, EvalModeIsBitIdentical) {
  auto cfg = tiny_config();
  cfg.dropout = 0.3;
  TransformerClassifier model(cfg);
  const auto a = model.classify(sequence({4, 5, 6}));
  const auto b = model.classify(sequence({4, 5, 6}));
  EXPECT_EQ(a.probs, b.probs);
  EXPECT_EQ(a.pooled, b.pooled);
}

TEST(Classifier, PadPositionsHaveNoInfluence) {
  TransformerClassifier model(tiny_config());
  auto seq = sequence({4, 5, 6});
  const auto before = model.classify(seq);
  std::mt19937 rng(1);
  for (std::size_t i = 5; i < 128; ++i) seq.ids[i] = 4 + static_cast<int>(rng() % 12);
  const auto after = model.classify(seq);
  EXPECT_EQ(before.probs, after.probs);
  EXPECT_EQ(before.logits, after.logits);
  EXPECT_EQ(before.pooled, after.pooled);
}

TEST(Classifier, OutOfVocabularyIdIsIndexError) {
  TransformerClassifier model(tiny_config(16));
  EXPECT_THROW(model.classify(sequence({99})), IndexError);
}

TEST(Classifier, RejectsIndivisibleHeads) {
  auto cfg = tiny_config();
  cfg.heads = 3;
  EXPECT_THROW(TransformerClassifier{cfg}, ConfigError);
}

TEST(SoftmaxProperty, ShiftInvarianceAndScalePreservesArgmax) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 3.0);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  std::uniform_real_distribution<double> scale(0.01, 20.0);
  for (int trial = 0; trial < 2000; ++trial) {
    Eigen::Matrix<double, 5, 1> z;
    for (int i = 0; i < 5; ++i) z(i) = gauss(rng);
    const auto p = softmax5(z);
    const auto q = softmax5((z.array() + shift(rng)).matrix());
    for (int i = 0; i < 5; ++i) {
      ASSERT_NEAR(p[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(i)],
                  1e-9 * p[static_cast<std::size_t>(i)] + 1e-300);
    }
    ASSERT_EQ(argmax_label(softmax5(z * scale(rng))), argmax_label(p));
  }
}

TEST(Softmax, TieBreakIsLowestId) {
  std::array<double, 5> p = {0.1, 0.3, 0.3, 0.2, 0.1};
  EXPECT_EQ(argmax_label(p).id, 1);
}

TEST(ClassifierGradient, MatchesFiniteDifferences) {
  TransformerClassifier model(tiny_config());
  const std::vector<std::pair<text::TokenSequence, int>> batch = {
      {sequence({4, 5, 6}), 1}, {sequence({7, 8}), 3}, {sequence({9, 10, 11, 12, 13}), 4}};
  const auto loss_fn = [&] {
    std::vector<nn::Var> terms;
    for (const auto& [seq, label] : batch) terms.push_back(model.loss(seq, label, {}));
    return nn::add_scalars(terms);
  };
  const auto report = testing::gradcheck(model.parameters(), loss_fn);
  // Attention key biases have an identically zero gradient (softmax is
  // shift-invariant per row); such tensors must agree absolutely instead.
  for (const auto& e : report) {
    if (std::max(e.analytic_norm, e.numeric_norm) < 1e-9) {
      EXPECT_LT(e.abs_error, 1e-9) << e.name;
    } else {
      EXPECT_LT(e.rel_error, 1e-4) << e.name << " |g|=" << e.analytic_norm;
    }
  }
  EXPECT_LT(testing::worst_relative_error(report, 1e-9), 1e-4);
}

TEST(TrainClassifier, KeywordDatasetReachesHighMacroF1) {
  const auto data = testing::keyword_dataset(200, 5);
  ClassifierTrainConfig cfg;
  cfg.epochs = 50;
  cfg.seed = 1;
  const auto result = train_classifier(data, cfg);
  ASSERT_EQ(result.history.size(), 50u);
  EXPECT_GT(result.history.back().macro_f1, 0.95);
  EXPECT_LT(result.history.back().loss, result.history.front().loss);
}

TEST(TrainClassifier, OverfitsTwentySentences) {
  const auto data = testing::twenty_sentences();
  ClassifierTrainConfig cfg;
  cfg.epochs = 80;
  cfg.batch_size = 4;
  cfg.seed = 2;
  const auto result = train_classifier(data, cfg);
  TransformerBackend backend(result.model, result.vocab);
  for (const auto& ex : data) {
    EXPECT_EQ(backend.classify_text(ex.text).predicted.id, ex.label) << ex.text;
  }
  EmotionPredictor predictor(std::make_shared<TransformerBackend>(result.model, result.vocab));
  EXPECT_EQ(predictor.predict_emotion_id("i am so angry at you"), 1);
  const int id = predictor.predict_emotion_id("");
  EXPECT_GE(id, 0);
  EXPECT_LE(id, 4);
}

TEST(TrainClassifier, SameSeedSameCurve) {
  const auto data = testing::keyword_dataset(40, 9);
  ClassifierTrainConfig cfg;
  cfg.epochs = 4;
  cfg.seed = 7;
  const auto a = train_classifier(data, cfg);
  const auto b = train_classifier(data, cfg);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].loss, b.history[i].loss);
    EXPECT_EQ(a.history[i].macro_f1, b.history[i].macro_f1);
  }
}

TEST(TrainClassifier, DataErrors) {
  ClassifierTrainConfig cfg;
  cfg.epochs = 1;
  EXPECT_THROW(train_classifier({{"a", 1}, {"b", 1}}, cfg), DataError);
  EXPECT_THROW(train_classifier({{"a", 1}, {"b", 7}}, cfg), DataError);
  EXPECT_THROW(train_classifier({}, cfg), DataError);
}

TEST(MacroF1, Oracle) {
  EXPECT_DOUBLE_EQ(macro_f1({0, 1, 2}, {0, 1, 2}), 1.0);
  // class 0: tp=1 fp=1 fn=0 -> 2/3; class 1: tp=0 fp=0 fn=1 -> 0
  EXPECT_NEAR(macro_f1({0, 0}, {0, 1}), (2.0 / 3.0 + 0.0) / 2.0, 1e-12);
}

TEST(ClassifierCheckpoint, RoundTripPreservesOutputs) {
  const auto data = testing::keyword_dataset(20, 1);
  ClassifierTrainConfig cfg;
  cfg.epochs = 2;
  const auto trained = train_classifier(data, cfg);
  testing::TempDir dir;
  save_classifier(dir / "classifier.ckpt", *trained.model, trained.vocab);
  const auto loaded = load_classifier(dir / "classifier.ckpt");
  TransformerBackend original(trained.model, trained.vocab);
  for (const auto& ex : data) {
    EXPECT_EQ(loaded->classify_text(ex.text).probs, original.classify_text(ex.text).probs);
  }
  EXPECT_THROW(load_classifier(dir / "missing.ckpt"), ModelNotLoaded);
}

TEST(EmotionPredictor, NotLoaded) {
  EmotionPredictor predictor;
  EXPECT_FALSE(predictor.loaded());
  EXPECT_THROW(predictor.predict_emotion_id("hello"), ModelNotLoaded);
}

TEST(FunctionBackend, AdaptsExternalEncoder) {
  auto backend = std::make_shared<FunctionBackend>("stub", [](std::string_view text) {
    std::array<double, 5> p = {0.1, 0.1, 0.1, 0.1, 0.6};
    if (text.find("angry") != std::string_view::npos) p = {0.05, 0.8, 0.05, 0.05, 0.05};
    return std::make_pair(p, Eigen::VectorXd::Ones(4).eval());
  });
  EmotionPredictor predictor(backend);
  EXPECT_EQ(predictor.predict_emotion_id("so angry"), 1);
  EXPECT_EQ(predictor.predict_emotion_id("yawn"), 4);
  EXPECT_EQ(predictor.classify("x").pooled.size(), 4);
  auto bad = std::make_shared<FunctionBackend>("bad", [](std::string_view) {
    return std::make_pair(std::array<double, 5>{0.5, 0.5, 0.5, 0, 0}, Eigen::VectorXd());
  });
  EXPECT_THROW(bad->classify_text("x"), SynthesisError);
}

}  // namespace
}  // namespace emotts::emoclass
