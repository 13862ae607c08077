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
#include <numeric>
#include <random>

#include "emotts/acoustic/model.h"
#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"
#include "emotts/nn/ops.h"
#include "emotts/text/phonemes.h"
#include "support/test_util.h"

namespace emotts::acoustic {
namespace {

using nn::Matrix;

AcousticConfig small_config(int hidden = 8, std::uint64_t seed = 5) {
  AcousticConfig c = AcousticConfig::tiny(hidden, 6);
  c.seed = seed;
  c.encoder_layers = 2;
  c.decoder_layers = 2;
  return c;
}

void zero_prefix(AcousticModel& model, const std::string& prefix) {
  for (const auto& [name, var] : model.parameters().entries()) {
    if (name.rfind(prefix, 0) == 0) {
      nn::Var v = var;
      v.mutable_value().setZero();
    }
  }
}

nn::Var param(AcousticModel& model, const std::string& name) {
  return model.parameters().get(name);
}

VarianceTargets targets_for(std::vector<int> durations) {
  VarianceTargets t;
  const auto n = static_cast<Eigen::Index>(durations.size());
  t.durations = std::move(durations);
  t.pitch = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  t.energy = Eigen::VectorXd::LinSpaced(n, 0.5, -0.5);
  return t;
}

const nn::ForwardContext kEval{};

TEST(AcousticConfig, DefaultsFollowTrainingParameters) {
  const AcousticConfig c;
  EXPECT_EQ(c.encoder_layers, 4);
  EXPECT_EQ(c.encoder_heads, 2);
  EXPECT_EQ(c.encoder_hidden, 256);
  EXPECT_EQ(c.decoder_layers, 6);
  EXPECT_EQ(c.decoder_heads, 2);
  EXPECT_EQ(c.decoder_hidden, 256);
  EXPECT_EQ(c.variance_filter, 256);
  EXPECT_EQ(c.variance_kernel, 3);
  EXPECT_DOUBLE_EQ(c.variance_dropout, 0.5);
  EXPECT_EQ(c.n_emotion, 5);
  EXPECT_EQ(c.n_mels, 80);
  EXPECT_EQ(c.n_symbols, text::PhonemeVocabulary::instance().size());
  EXPECT_NO_THROW(c.validate());
}

TEST(AcousticConfig, RejectsInvalidCombinations) {
  AcousticConfig c;
  c.encoder_heads = 3;
  EXPECT_THROW(c.validate(), ConfigError);
  c = AcousticConfig{};
  c.n_emotion = 4;
  EXPECT_THROW(c.validate(), ConfigError);
  c.multi_emotion = false;
  EXPECT_NO_THROW(c.validate());
  c = AcousticConfig{};
  c.decoder_hidden = 128;
  EXPECT_THROW(c.validate(), ConfigError);
  c = AcousticConfig{};
  c.ff_kernel = 4;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(AcousticConfig, JsonRoundTrip) {
  AcousticConfig c = small_config();
  c.n_speakers = 7;
  const nlohmann::json j = c;
  const auto back = j.get<AcousticConfig>();
  EXPECT_EQ(nlohmann::json(back), j);
}

TEST(AcousticModel, EmotionTableHasFiveRows) {
  AcousticModel model(small_config());
  EXPECT_EQ(param(model, "condition.emotions.table").rows(), 5);
  EXPECT_EQ(param(model, "condition.speakers.table").rows(), 4);
  EXPECT_TRUE(model.parameters().all_finite());
}

TEST(AcousticModel, ReferenceSentenceEmbedsToElevenBy256) {
  AcousticConfig c;
  c.encoder_layers = 1;
  c.decoder_layers = 1;
  c.ff_filter = 16;
  AcousticModel model(c);
  const auto ids = text::PhonemeVocabulary::instance().encode(
      {"K", "IY1", "P", "AH0", "N", "AY1", "AA1", "N", "HH", "IH1", "M"});
  const nn::Var x = model.embed_phonemes(ids);
  EXPECT_EQ(x.rows(), 11);
  EXPECT_EQ(x.cols(), 256);
}

TEST(AcousticModel, RepeatedIdsDifferByPositionalEncodingOnly) {
  AcousticModel model(small_config());
  const nn::Var x = model.embed_phonemes({10, 20, 10});
  const Matrix pe = nn::sinusoid_table(3, 8);
  const Matrix delta = x.value().row(2) - x.value().row(0);
  const Matrix expected = pe.row(2) - pe.row(0);
  EXPECT_LT((delta - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AcousticModel, EmptyIdsGiveEmptyMatrix) {
  AcousticModel model(small_config());
  const nn::Var x = model.embed_phonemes({});
  EXPECT_EQ(x.rows(), 0);
  EXPECT_EQ(x.cols(), 8);
  EXPECT_EQ(model.encode(x, 0, kEval).rows(), 0);
}

TEST(AcousticModel, OutOfVocabularyIdThrows) {
  AcousticModel model(small_config());
  EXPECT_THROW(model.embed_phonemes({1, model.config().n_symbols}), IndexError);
  EXPECT_THROW(model.embed_phonemes({-1}), IndexError);
}

TEST(AcousticModel, EncoderPreservesShape) {
  AcousticModel model(small_config());
  for (int n : {1, 11, 50}) {
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = 3 + i % 80;
    const nn::Var h = model.encode(model.embed_phonemes(ids), n, kEval);
    EXPECT_EQ(h.rows(), n);
    EXPECT_EQ(h.cols(), 8);
    EXPECT_TRUE(h.value().allFinite());
  }
}

TEST(AcousticModel, AttentionRowsSumToOne) {
  AcousticModel model(small_config());
  std::vector<Matrix> weights;
  model.encode(model.embed_phonemes({5, 6, 7, 8, 9}), 5, kEval, &weights);
  ASSERT_EQ(weights.size(), 2u * 2u);  // layers x heads
  for (const auto& w : weights) {
    ASSERT_EQ(w.rows(), 5);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      EXPECT_NEAR(w.row(r).sum(), 1.0, 1e-6);
    }
  }
}

TEST(AcousticModel, InjectConditionIsTimeConstant) {
  AcousticModel model(small_config());
  const nn::Var h = model.encode(model.embed_phonemes({4, 8, 15, 16, 23, 42}), 6, kEval);
  for (int e = 0; e < kNumEmotions; ++e) {
    const Matrix diff = model.inject_condition(h, 1, e).value() - h.value();
    double worst = 0.0;
    for (Eigen::Index t = 0; t < diff.rows(); ++t) {
      worst = std::max(worst, (diff.row(t) - diff.row(0)).norm());
    }
    EXPECT_LT(worst, 1e-9);
  }
  // Two emotions on the same H differ by a time-constant vector too.
  const Matrix a = model.inject_condition(h, 0, 0).value();
  const Matrix b = model.inject_condition(h, 0, 4).value();
  const Matrix d = a - b;
  for (Eigen::Index t = 1; t < d.rows(); ++t) EXPECT_LT((d.row(t) - d.row(0)).norm(), 1e-9);
}

TEST(AcousticModel, NegativeEmotionProjectionIsKilledByRelu) {
  AcousticModel model(small_config());
  nn::Var w = param(model, "condition.emotion_linear.weight");
  nn::Var bvar = param(model, "condition.emotion_linear.bias");
  w.mutable_value().setZero();
  bvar.mutable_value().setConstant(-3.0);
  const nn::Var h = model.encode(model.embed_phonemes({4, 8, 15}), 3, kEval);
  const Eigen::RowVectorXd spk = param(model, "condition.speakers.table").value().row(2);
  const Matrix out = model.inject_condition(h, 2, 1).value();
  for (Eigen::Index t = 0; t < 3; ++t) {
    EXPECT_TRUE(out.row(t) == h.value().row(t) + spk) << t;
  }
}

TEST(AcousticModel, AmusedUsesTableRowZero) {
  AcousticModel model(small_config());
  const nn::Var h = model.encode(model.embed_phonemes({4, 8}), 2, kEval);
  const Matrix before0 = model.inject_condition(h, 0, 0).value();
  const Matrix before3 = model.inject_condition(h, 0, 3).value();
  nn::Var table = param(model, "condition.emotions.table");
  table.mutable_value().row(0).array() += 1.0;
  EXPECT_GT((model.inject_condition(h, 0, 0).value() - before0).norm(), 0.0);
  EXPECT_EQ(model.inject_condition(h, 0, 3).value(), before3);
}

TEST(AcousticModel, UnknownConditionIdsThrow) {
  AcousticModel model(small_config());
  const nn::Var h = model.encode(model.embed_phonemes({4}), 1, kEval);
  EXPECT_THROW(model.inject_condition(h, 4, 0), IndexError);
  EXPECT_THROW(model.inject_condition(h, -1, 0), IndexError);
  EXPECT_THROW(model.inject_condition(h, 0, 5), IndexError);
}

TEST(AcousticModel, SingleSpeakerSingleEmotionSkipConditioning) {
  AcousticConfig c = small_config();
  c.multi_speaker = false;
  c.multi_emotion = false;
  AcousticModel model(c);
  EXPECT_FALSE(model.parameters().contains("condition.speakers.table"));
  const nn::Var h = model.encode(model.embed_phonemes({4, 5}), 2, kEval);
  EXPECT_EQ(model.inject_condition(h, 99, 99).value(), h.value());
}

TEST(Bucketize, MatchesLeftClosedSearch) {
  const Eigen::VectorXd b = bucket_boundaries(0.0, 2.0, 4);  // [0, 1, 2]
  ASSERT_EQ(b.size(), 3);
  EXPECT_EQ(bucketize(-1.0, b), 0);
  EXPECT_EQ(bucketize(0.0, b), 0);
  EXPECT_EQ(bucketize(0.5, b), 1);
  EXPECT_EQ(bucketize(1.0, b), 1);
  EXPECT_EQ(bucketize(2.0, b), 2);
  EXPECT_EQ(bucketize(7.0, b), 3);
}

TEST(Bucketize, CoversAllBinsProperty) {
  const Eigen::VectorXd b = bucket_boundaries(-3.0, 3.0, 256);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const int k = bucketize(u(rng), b);
    EXPECT_GE(k, 0);
    EXPECT_LT(k, 256);
  }
}

TEST(LengthRegulator, RepeatsRowsAndDropsZeroDurations) {
  AcousticModel model(small_config());
  zero_prefix(model, "variance.pitch_embedding");
  zero_prefix(model, "variance.energy_embedding");
  Matrix rows(3, 8);
  rows.row(0).setConstant(1.0);
  rows.row(1).setConstant(2.0);
  rows.row(2).setConstant(3.0);
  const auto t = targets_for({2, 0, 3});
  auto [expanded, out] = model.variance_adapt(nn::constant(rows), 3, &t, kEval);
  ASSERT_EQ(expanded.rows(), 5);
  const std::vector<int> expected_src = {0, 0, 2, 2, 2};
  for (int r = 0; r < 5; ++r) {
    EXPECT_EQ(expanded.value().row(r), rows.row(expected_src[static_cast<std::size_t>(r)])) << r;
  }
  EXPECT_EQ(out.durations, (std::vector<int>{2, 0, 3}));
  EXPECT_EQ(out.log_durations.rows(), 3);
  EXPECT_EQ(out.pitch.rows(), 3);
  EXPECT_EQ(out.energy.rows(), 3);
}

TEST(LengthRegulator, ExpandedLengthEqualsDurationSumProperty) {
  AcousticModel model(small_config());
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<int> dur(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = len(rng);
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int& v : d) v = dur(rng);
    if (std::accumulate(d.begin(), d.end(), 0) == 0) d[0] = 1;
    const nn::Var h = nn::constant(Matrix::Random(n, 8));
    const auto t = targets_for(d);
    auto [expanded, out] = model.variance_adapt(h, n, &t, kEval);
    EXPECT_EQ(expanded.rows(), std::accumulate(d.begin(), d.end(), 0));
  }
}

TEST(LengthRegulator, TeacherForcedAuthorGives91Rows) {
  AcousticModel model(small_config());
  const auto t = targets_for({57, 24, 10});
  const nn::Var h = model.encode(model.embed_phonemes({30, 40, 50}), 3, kEval);
  auto [expanded, out] = model.variance_adapt(h, 3, &t, kEval);
  EXPECT_EQ(expanded.rows(), 91);
  auto [before, after] = model.decode_mel(expanded, 91, kEval);
  EXPECT_EQ(before.rows(), 91);
  EXPECT_EQ(after.cols(), 6);
}

TEST(LengthRegulator, TargetLengthMismatchThrows) {
  AcousticModel model(small_config());
  const auto t = targets_for({1, 2});
  const nn::Var h = nn::constant(Matrix::Zero(3, 8));
  EXPECT_THROW(model.variance_adapt(h, 3, &t, kEval), ShapeError);
}

TEST(DurationRule, LogTwoGivesOneFrame) {
  const Eigen::VectorXd d = Eigen::VectorXd::Constant(4, std::log(2.0));
  EXPECT_EQ(durations_from_log(d), (std::vector<int>{1, 1, 1, 1}));
  Eigen::VectorXd v(4);
  v << -5.0, 0.0, std::log(3.6), std::log(11.0);
  EXPECT_EQ(durations_from_log(v), (std::vector<int>{0, 0, 3, 10}));
  EXPECT_EQ(durations_from_log(v, 2.0), (std::vector<int>{0, 0, 5, 20}));
}

TEST(DurationRule, InferenceUsesPredictedLogDurations) {
  AcousticModel model(small_config());
  zero_prefix(model, "variance.duration.head.weight");
  param(model, "variance.duration.head.bias").mutable_value().setConstant(std::log(2.0));
  AcousticInput in{{5, 6, 7, 8}, 0, 3};
  const auto out = model.forward(in, nullptr, kEval);
  EXPECT_EQ(out.variance.durations, (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(out.frames, 4);
  EXPECT_EQ(out.mel_after.rows(), 4);
}

TEST(DurationRule, AllZeroPredictionFallsBackToOneFramePerPhoneme) {
  AcousticModel model(small_config());
  zero_prefix(model, "variance.duration.head.weight");
  param(model, "variance.duration.head.bias").mutable_value().setConstant(-4.0);
  const auto out = model.forward(AcousticInput{{5, 6, 7}, 0, 3}, nullptr, kEval);
  EXPECT_EQ(out.variance.durations, (std::vector<int>{1, 1, 1}));
}

TEST(DurationRule, UntrainedModelSpeaksAtAboutFiveFramesPerPhoneme) {
  AcousticModel model(small_config());
  zero_prefix(model, "variance.duration.head.weight");
  const auto out = model.forward(AcousticInput{{5, 6}, 0, 3}, nullptr, kEval);
  EXPECT_EQ(out.variance.durations, (std::vector<int>{5, 5}));
}

TEST(DurationRule, OverrideReplacesPredictedDurations) {
  AcousticModel model(small_config());
  InferenceControls controls;
  controls.durations = {3, 0, 2};
  const auto out = model.forward(AcousticInput{{5, 6, 7}, 0, 3}, nullptr, kEval, controls);
  EXPECT_EQ(out.variance.durations, controls.durations);
  EXPECT_EQ(out.mel_after.rows(), 5);
  controls.durations = {1, 1};
  EXPECT_THROW(model.forward(AcousticInput{{5, 6, 7}, 0, 3}, nullptr, kEval, controls), ShapeError);
}

TEST(Decoder, ZeroPostnetIsIdentity) {
  AcousticModel model(small_config());
  zero_prefix(model, "postnet.");
  const auto out = model.forward(AcousticInput{{5, 6, 7}, 1, 2}, nullptr, kEval);
  EXPECT_EQ(out.mel_after.value(), out.mel_before.value());
}

TEST(Decoder, OutputsAreFramesByMels) {
  AcousticConfig c = small_config();
  c.n_mels = 80;
  AcousticModel model(c);
  const auto t = targets_for({3, 4});
  const auto out = model.forward(AcousticInput{{5, 6}, 0, 0}, &t, kEval);
  EXPECT_EQ(out.mel_before.rows(), 7);
  EXPECT_EQ(out.mel_before.cols(), 80);
  EXPECT_EQ(out.mel_after.rows(), 7);
  EXPECT_EQ(out.mel_after.cols(), 80);
}

TEST(Decoder, EmptyInputThrows) {
  AcousticModel model(small_config());
  EXPECT_THROW(model.forward(AcousticInput{{}, 0, 0}, nullptr, kEval), ShapeError);
}

TEST(Decoder, EmotionChangesTheMel) {
  AcousticModel model(small_config());
  const auto t = targets_for({3, 4, 2});
  const auto a = model.forward(AcousticInput{{5, 6, 7}, 0, 0}, &t, kEval);
  const auto b = model.forward(AcousticInput{{5, 6, 7}, 0, 3}, &t, kEval);
  ASSERT_EQ(a.mel_after.rows(), b.mel_after.rows());
  EXPECT_GT((a.mel_after.value() - b.mel_after.value()).cwiseAbs().sum(), 0.0);
}

TEST(AcousticModel, EvalModeIsDeterministic) {
  AcousticConfig c = small_config();
  c.encoder_dropout = c.decoder_dropout = c.variance_dropout = c.postnet_dropout = 0.3;
  AcousticModel m1(c);
  AcousticModel m2(c);
  const AcousticInput in{{9, 10, 11, 12}, 3, 4};
  const auto a = m1.forward(in, nullptr, kEval);
  const auto b = m1.forward(in, nullptr, kEval);
  const auto d = m2.forward(in, nullptr, kEval);
  EXPECT_EQ(a.mel_after.value(), b.mel_after.value());
  EXPECT_EQ(a.mel_after.value(), d.mel_after.value());
}

TEST(AcousticModel, TrainingModeDropoutUsesRng) {
  AcousticConfig c = small_config();
  c.decoder_dropout = 0.3;
  AcousticModel model(c);
  const auto t = targets_for({2, 2});
  std::mt19937_64 r1(1), r2(1), r3(2);
  const AcousticInput in{{9, 10}, 0, 1};
  const auto a = model.forward(in, &t, nn::ForwardContext{true, &r1});
  const auto b = model.forward(in, &t, nn::ForwardContext{true, &r2});
  const auto d = model.forward(in, &t, nn::ForwardContext{true, &r3});
  EXPECT_EQ(a.mel_after.value(), b.mel_after.value());
  EXPECT_NE(a.mel_after.value(), d.mel_after.value());
}

TEST(Batching, PaddedBatchMatchesSingleUtterances) {
  AcousticModel model(small_config());
  const std::vector<AcousticInput> inputs = {
      {{5, 6, 7, 8, 9, 10, 11}, 0, 0}, {{12, 13}, 1, 3}, {{14, 15, 16, 17}, 2, 4}};
  const std::vector<VarianceTargets> targets = {targets_for({1, 2, 3, 1, 0, 2, 2}),
                                                targets_for({4, 5}), targets_for({1, 1, 1, 1})};
  for (bool forced : {true, false}) {
    const auto batch = model.forward_batch(inputs, forced ? &targets : nullptr, kEval);
    ASSERT_EQ(batch.size(), inputs.size());
    for (std::size_t b = 0; b < inputs.size(); ++b) {
      const auto single = model.forward(inputs[b], forced ? &targets[b] : nullptr, kEval);
      ASSERT_EQ(batch[b].frames, single.frames);
      EXPECT_EQ(batch[b].variance.durations, single.variance.durations);
      EXPECT_LT((batch[b].mel_after.value() - single.mel_after.value()).cwiseAbs().maxCoeff(), 1e-6);
      EXPECT_LT((batch[b].variance.log_durations.value() - single.variance.log_durations.value())
                    .cwiseAbs()
                    .maxCoeff(),
                1e-6);
      EXPECT_LT((batch[b].variance.pitch.value() - single.variance.pitch.value()).cwiseAbs().maxCoeff(),
                1e-6);
    }
  }
}

TEST(Batching, PermutingBatchPermutesOutputs) {
  AcousticModel model(small_config());
  const std::vector<AcousticInput> inputs = {{{5, 6, 7}, 0, 0}, {{8, 9, 10, 11, 12}, 1, 1}};
  const std::vector<AcousticInput> swapped = {inputs[1], inputs[0]};
  const auto a = model.forward_batch(inputs, nullptr, kEval);
  const auto b = model.forward_batch(swapped, nullptr, kEval);
  for (int i = 0; i < 2; ++i) {
    ASSERT_EQ(a[static_cast<std::size_t>(i)].frames, b[static_cast<std::size_t>(1 - i)].frames);
    EXPECT_LT((a[static_cast<std::size_t>(i)].mel_after.value() -
               b[static_cast<std::size_t>(1 - i)].mel_after.value())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-9);
  }
}

TEST(Checkpointing, RoundTripPreservesOutputs) {
  testing::TempDir dir;
  AcousticModel model(small_config());
  VarianceStats stats;
  stats.pitch_mean = 180.0;
  stats.pitch_std = 40.0;
  stats.pitch_min = -2.0;
  stats.pitch_max = 2.5;
  model.set_stats(stats);
  save_acoustic(dir / "acoustic.ckpt", model);
  const auto loaded = load_acoustic(dir / "acoustic.ckpt");
  EXPECT_DOUBLE_EQ(loaded->stats().pitch_mean, 180.0);
  const AcousticInput in{{5, 6, 7}, 1, 2};
  EXPECT_EQ(loaded->forward(in, nullptr, kEval).mel_after.value(),
            model.forward(in, nullptr, kEval).mel_after.value());
}

TEST(Checkpointing, MissingAndForeignFiles) {
  testing::TempDir dir;
  EXPECT_THROW(load_acoustic(dir / "nope.ckpt"), ModelNotLoaded);
  io::Checkpoint other;
  other.kind = "emotion_classifier";
  io::save_checkpoint(dir / "other.ckpt", other);
  EXPECT_THROW(load_acoustic(dir / "other.ckpt"), WeightMismatch);
}

TEST(VarianceStatsTest, RejectsDegenerateStatistics) {
  AcousticModel model(small_config());
  VarianceStats s;
  s.pitch_std = 0.0;
  EXPECT_THROW(model.set_stats(s), ConfigError);
  s = VarianceStats{};
  s.energy_min = 2.0;
  s.energy_max = 1.0;
  EXPECT_THROW(model.set_stats(s), ConfigError);
}

}  // namespace
}  // namespace emotts::acoustic
