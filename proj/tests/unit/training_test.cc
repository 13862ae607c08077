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
#include <fstream>
#include <random>

#include <json.hpp>

#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"
#include "emotts/nn/ops.h"
#include "emotts/nn/optim.h"
#include "emotts/training/losses.h"
#include "emotts/training/schedule.h"
#include "emotts/training/trainer.h"
#include "support/gradcheck.h"
#include "support/toy_data.h"

namespace emotts::training {
namespace {

using acoustic::AcousticConfig;
using acoustic::AcousticModel;
using acoustic::AcousticOutput;
using nn::Matrix;

Eigen::RowVector2d row(double a, double b) { return Eigen::RowVector2d(a, b); }

// ---------------------------------------------------------------- losses

TEST(Losses, HandValues) {
  EXPECT_NEAR(l1_loss(row(1, 3), row(2, 5)), 1.5, 1e-12);
  EXPECT_NEAR(mse_loss(row(1, 3), row(2, 5)), 2.5, 1e-12);
  EXPECT_EQ(l1_loss(row(1, 3), row(1, 3)), 0.0);
  EXPECT_EQ(mse_loss(row(1, 3), row(1, 3)), 0.0);
}

TEST(Losses, ShapeMismatchThrows) {
  const Eigen::MatrixXd two = row(1, 3);
  const Eigen::MatrixXd three = Eigen::RowVector3d(1, 2, 3);
  EXPECT_THROW(l1_loss(two, three), ShapeError);
  EXPECT_THROW(mse_loss(two, three), ShapeError);
}

TEST(Losses, MaskedRowsAreExcluded) {
  Matrix pred(3, 2), truth(3, 2);
  pred << 1, 3, 0, 0, 9, 9;
  truth << 2, 5, 0, 0, -4, 7;
  const double l1 = l1_loss(pred, truth, 2);
  const double mse = mse_loss(pred, truth, 2);
  pred.row(2).setConstant(1e6);
  EXPECT_EQ(l1_loss(pred, truth, 2), l1);
  EXPECT_EQ(mse_loss(pred, truth, 2), mse);
  EXPECT_NEAR(l1, 3.0 / 4.0, 1e-12);
}

TEST(Losses, MseIsQuadraticAndBothAreSymmetricProperty) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 100; ++trial) {
    Matrix a(4, 3), b(4, 3);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a.data()[i] = n(rng);
      b.data()[i] = n(rng);
    }
    EXPECT_EQ(l1_loss(a, b), l1_loss(b, a));
    EXPECT_EQ(mse_loss(a, b), mse_loss(b, a));
    const Matrix doubled = b + 2.0 * (a - b);
    EXPECT_NEAR(mse_loss(doubled, b), 4.0 * mse_loss(a, b), 1e-12);
  }
}

TEST(LossBreakdownTest, TotalIsComponentSum) {
  const auto b = LossBreakdown::from_components(0.1, 0.1, 0.2, 0.3, 0.3);
  EXPECT_NEAR(b.total, 1.0, 1e-12);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double c[5] = {u(rng), u(rng), u(rng), u(rng), u(rng)};
    const auto l = LossBreakdown::from_components(c[0], c[1], c[2], c[3], c[4]);
    const double sum = c[0] + c[1] + c[2] + c[3] + c[4];
    EXPECT_LE(std::abs(l.total - sum), 1e-12 * sum);
  }
}

UtteranceTargets simple_targets(std::vector<int> durations, int mels = 3) {
  UtteranceTargets t;
  const auto n = static_cast<Eigen::Index>(durations.size());
  int frames = 0;
  for (int d : durations) frames += d;
  t.variance.durations = std::move(durations);
  t.variance.pitch = Eigen::VectorXd::LinSpaced(n, -1, 1);
  t.variance.energy = Eigen::VectorXd::LinSpaced(n, 2, 0);
  t.mel = Matrix::Random(frames, mels);
  return t;
}

AcousticOutput perfect_output(const UtteranceTargets& t) {
  AcousticOutput o;
  o.mel_before = nn::constant(t.mel);
  o.mel_after = nn::constant(t.mel);
  o.variance.pitch = nn::constant(Matrix(t.variance.pitch));
  o.variance.energy = nn::constant(Matrix(t.variance.energy));
  Matrix logd(static_cast<Eigen::Index>(t.variance.durations.size()), 1);
  for (Eigen::Index i = 0; i < logd.rows(); ++i) {
    logd(i, 0) = std::log1p(t.variance.durations[static_cast<std::size_t>(i)]);
  }
  o.variance.log_durations = nn::constant(logd);
  o.frames = t.mel.rows();
  return o;
}

TEST(TotalLoss, PerfectPredictionGivesZeros) {
  const auto t = simple_targets({2, 1, 3});
  const auto l = total_loss(perfect_output(t), t).breakdown;
  EXPECT_EQ(l.mel, 0.0);
  EXPECT_EQ(l.postnet_mel, 0.0);
  EXPECT_EQ(l.pitch, 0.0);
  EXPECT_EQ(l.energy, 0.0);
  EXPECT_EQ(l.duration, 0.0);
  EXPECT_EQ(l.total, 0.0);
}

TEST(TotalLoss, DurationLossUsesLogOnePlusFrames) {
  auto t = simple_targets({1, 3});
  auto o = perfect_output(t);
  o.variance.log_durations = nn::constant(Matrix::Zero(2, 1));
  const double expected = (std::pow(std::log(2.0), 2) + std::pow(std::log(4.0), 2)) / 2.0;
  EXPECT_NEAR(total_loss(o, t).breakdown.duration, expected, 1e-12);
  // Doubling the linear durations: log(1 + 2d) per phoneme.
  auto t2 = simple_targets({2, 6});
  auto o2 = perfect_output(t2);
  o2.variance.log_durations = nn::constant(Matrix::Zero(2, 1));
  const double doubled = (std::pow(std::log(3.0), 2) + std::pow(std::log(7.0), 2)) / 2.0;
  EXPECT_NEAR(total_loss(o2, t2).breakdown.duration, doubled, 1e-12);
}

TEST(TotalLoss, MismatchedShapesThrow) {
  const auto t = simple_targets({2, 1});
  auto o = perfect_output(t);
  o.mel_after = nn::constant(Matrix::Zero(4, 3));
  EXPECT_THROW(total_loss(o, t), ShapeError);
}

TEST(TotalLoss, BatchIsMaskedMeanOverAllElements) {
  std::vector<UtteranceTargets> ts = {simple_targets({2, 1}), simple_targets({4, 1, 1})};
  std::vector<AcousticOutput> os;
  double abs_sum = 0.0, count = 0.0, sq = 0.0, phones = 0.0;
  for (auto& t : ts) {
    auto o = perfect_output(t);
    const Matrix noisy = t.mel.array() + 0.5;
    o.mel_before = nn::constant(noisy);
    abs_sum += (noisy - t.mel).cwiseAbs().sum();
    count += static_cast<double>(t.mel.size());
    const Matrix p = Matrix(t.variance.pitch).array() + 1.0;
    o.variance.pitch = nn::constant(p);
    sq += (p - Matrix(t.variance.pitch)).squaredNorm();
    phones += static_cast<double>(t.variance.pitch.size());
    os.push_back(o);
  }
  const auto l = total_loss(os, ts).breakdown;
  EXPECT_NEAR(l.mel, abs_sum / count, 1e-12);
  EXPECT_NEAR(l.pitch, sq / phones, 1e-12);
  EXPECT_EQ(l.total, l.mel + l.postnet_mel + l.pitch + l.energy + l.duration);
}

// -------------------------------------------------------------- schedule

TEST(Schedule, WarmupPeak) {
  const OptimizerConfig cfg;
  EXPECT_NEAR(lr_at(4000, cfg), 9.882e-4, 1e-7);
  EXPECT_NEAR(lr_at(4000, cfg), 1.0 / (16.0 * std::sqrt(4000.0)), 1e-15);
}

TEST(Schedule, AnnealFactorAfterTwoThresholds) {
  const OptimizerConfig cfg;
  OptimizerConfig no_anneal = cfg;
  no_anneal.anneal_steps.clear();
  EXPECT_NEAR(lr_at(450000, cfg) / lr_at(450000, no_anneal), 0.09, 1e-12);
  EXPECT_NEAR(lr_at(299999, cfg) / lr_at(299999, no_anneal), 1.0, 1e-12);
  EXPECT_NEAR(lr_at(500000, cfg) / lr_at(500000, no_anneal), 0.027, 1e-12);
}

TEST(Schedule, ShapeProperty) {
  OptimizerConfig cfg;
  for (long s = 1; s < 4000; ++s) ASSERT_LT(lr_at(s, cfg), lr_at(s + 1, cfg)) << s;
  for (long s = 4000; s < 600000; s += 997) ASSERT_GE(lr_at(s, cfg), lr_at(s + 997, cfg)) << s;
  for (long s : {1L, 10L, 4000L, 1000000L, 100000000L}) EXPECT_GT(lr_at(s, cfg), 0.0);
  cfg.base_scale = 2.0;
  EXPECT_NEAR(lr_at(123, cfg), 2.0 * lr_at(123, OptimizerConfig{}), 1e-18);
  EXPECT_THROW(lr_at(0, cfg), ConfigError);
}

TEST(Schedule, ConfigValidation) {
  OptimizerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.anneal_steps = {400000, 300000};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = OptimizerConfig{};
  cfg.warmup = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  const OptimizerConfig d;
  EXPECT_EQ(d.batch_size, 16);
  EXPECT_DOUBLE_EQ(d.beta1, 0.9);
  EXPECT_DOUBLE_EQ(d.beta2, 0.98);
  EXPECT_DOUBLE_EQ(d.eps, 1e-9);
  EXPECT_DOUBLE_EQ(d.grad_clip, 1.0);
  EXPECT_EQ(d.anneal_steps, (std::vector<long>{300000, 400000, 500000}));
  EXPECT_DOUBLE_EQ(d.anneal_rate, 0.3);
}

// ------------------------------------------------------------- optimizer

TEST(Optimizer, AdamMatchesReferenceImplementation) {
  nn::ParameterStore store;
  Matrix init(1, 3);
  init << 0.5, -1.5, 2.0;
  nn::Var p = store.add("p", init);
  nn::Adam adam(store, nn::AdamConfig{0.9, 0.98, 1e-9, 0.0});

  // Reference: plain scalar loops.
  double x[3] = {0.5, -1.5, 2.0}, m[3] = {0, 0, 0}, v[3] = {0, 0, 0};
  const double target[3] = {1.0, 2.0, -3.0};
  for (int t = 1; t <= 100; ++t) {
    store.zero_grad();
    nn::Var diff = p - nn::constant((Matrix(1, 3) << 1.0, 2.0, -3.0).finished());
    nn::sum(nn::square(diff)).backward();
    adam.step(0.01);
    for (int i = 0; i < 3; ++i) {
      const double g = 2.0 * (x[i] - target[i]);
      m[i] = 0.9 * m[i] + 0.1 * g;
      v[i] = 0.98 * v[i] + 0.02 * g * g;
      const double mh = m[i] / (1.0 - std::pow(0.9, t));
      const double vh = v[i] / (1.0 - std::pow(0.98, t));
      x[i] -= 0.01 * mh / (std::sqrt(vh) + 1e-9);
    }
    for (int i = 0; i < 3; ++i) ASSERT_NEAR(p.value()(0, i), x[i], 1e-12) << "step " << t;
  }
}

TEST(Optimizer, ClipScalesNormTenToOne) {
  nn::ParameterStore store;
  nn::Var a = store.add("a", Matrix::Zero(1, 2));
  nn::Var b = store.add("b", Matrix::Zero(1, 1));
  a.grad_ref() << 6.0, 0.0;
  b.grad_ref() << 8.0;
  EXPECT_NEAR(nn::clip_grad_norm(store, 1.0), 10.0, 1e-12);
  EXPECT_NEAR(store.grad_norm(), 1.0, 1e-12);
  EXPECT_NEAR(a.grad()(0, 0), 0.6, 1e-12);
  EXPECT_NEAR(b.grad()(0, 0), 0.8, 1e-12);
  // Below the threshold gradients are untouched.
  EXPECT_NEAR(nn::clip_grad_norm(store, 2.0), 1.0, 1e-12);
  EXPECT_NEAR(b.grad()(0, 0), 0.8, 1e-15);
}

// -------------------------------------------------------- gradient check

TEST(GradientIntegrity, TotalLossMatchesFiniteDifferences) {
  AcousticConfig c = AcousticConfig::tiny(8, 4);
  c.seed = 21;
  c.n_speakers = 2;
  c.postnet_layers = 2;
  AcousticModel model(c);
  UtteranceTargets t = simple_targets({2, 1, 3}, 4);
  t.input = acoustic::AcousticInput{{10, 20, 30}, 1, 2};
  const nn::ForwardContext ctx{};
  const auto report = testing::gradcheck(model.parameters(), [&] {
    return total_loss(model.forward(t.input, &t.variance, ctx), t).total;
  });
  for (const auto& e : report) {
    if (std::max(e.analytic_norm, e.numeric_norm) < 1e-9) {
      EXPECT_LT(e.abs_error, 1e-9) << e.name;
    } else {
      EXPECT_LT(e.rel_error, 1e-4) << e.name << " analytic " << e.analytic_norm << " numeric "
                                   << e.numeric_norm;
    }
  }
}

// -------------------------------------------------------------- training

struct ToyTraining : ::testing::Test {
  static void SetUpTestSuite() {
    dir = new testing::TempDir();
    data = new std::vector<corpus::AlignedUtterance>(testing::toy_dataset(*dir, 2));
  }
  static void TearDownTestSuite() {
    delete data;
    delete dir;
  }
  static AcousticTrainConfig quick(long steps) {
    AcousticTrainConfig tc;
    tc.steps = steps;
    tc.optimizer.warmup = 50;
    tc.seed = 9;
    return tc;
  }
  static AcousticConfig model_config() {
    AcousticConfig c = AcousticConfig::tiny(16, 80);
    c.seed = 4;
    c.decoder_dropout = 0.1;
    return c;
  }
  static testing::TempDir* dir;
  static std::vector<corpus::AlignedUtterance>* data;
};
testing::TempDir* ToyTraining::dir = nullptr;
std::vector<corpus::AlignedUtterance>* ToyTraining::data = nullptr;

TEST_F(ToyTraining, PrepareTargetsAlignsWithUtterance) {
  AcousticModel model(model_config());
  const auto speakers = acoustic::SpeakerTable::from_names({"bea", "jenie"});
  const auto& u = (*data)[0];
  const auto t = prepare_targets(u, model, speakers);
  EXPECT_EQ(t.input.phoneme_ids.size(), u.record.phonemes.size());
  EXPECT_EQ(t.input.speaker, speakers.id(u.record.speaker_id));
  EXPECT_EQ(t.input.emotion, u.record.emotion.id);
  EXPECT_EQ(t.mel.rows(), u.mel.num_frames());
  EXPECT_EQ(t.variance.pitch.size(), static_cast<Eigen::Index>(u.record.phonemes.size()));
  EXPECT_THROW(prepare_targets(u, model, acoustic::SpeakerTable::from_names({"sam"})),
               UnknownSpeaker);
}

TEST_F(ToyTraining, VarianceStatsNormaliseTheCorpus) {
  const auto s = compute_variance_stats(*data);
  EXPECT_GT(s.pitch_mean, 60.0);
  EXPECT_GT(s.pitch_std, 0.0);
  EXPECT_LT(s.pitch_min, 0.0);
  EXPECT_GT(s.pitch_max, 0.0);
  EXPECT_GT(s.energy_std, 0.0);
}

TEST_F(ToyTraining, LossDecreasesAndLogIsConsistent) {
  AcousticModel model(model_config());
  testing::TempDir out;
  auto tc = quick(60);
  tc.output_dir = out.path();
  tc.checkpoint_every = 30;
  const auto r = train_acoustic(*data, model, tc);
  ASSERT_EQ(r.history.size(), 60u);
  EXPECT_LT(r.history.back().loss.total, 0.5 * r.history.front().loss.total);

  std::ifstream log(out / "train_log.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(log, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* k : {"step", "lr", "mel", "postnet_mel", "pitch", "energy", "duration", "total"}) {
      ASSERT_TRUE(j.contains(k)) << k;
    }
    const double sum = j["mel"].get<double>() + j["postnet_mel"].get<double>() +
                       j["pitch"].get<double>() + j["energy"].get<double>() +
                       j["duration"].get<double>();
    EXPECT_LE(std::abs(j["total"].get<double>() - sum), 1e-12 * sum);
    ++lines;
  }
  EXPECT_EQ(lines, 60);
  EXPECT_TRUE(std::filesystem::exists(out / "acoustic_step_30.ckpt"));
  EXPECT_TRUE(std::filesystem::exists(out / "acoustic_step_60.ckpt"));
  const auto loaded = acoustic::load_acoustic(out / "acoustic.ckpt");
  EXPECT_EQ(loaded->parameters().snapshot(), model.parameters().snapshot());
  EXPECT_EQ(acoustic::SpeakerTable::load(out / "speakers.json").names(), r.speakers.names());
}

TEST_F(ToyTraining, SameSeedGivesIdenticalLogs) {
  AcousticModel a(model_config());
  AcousticModel b(model_config());
  const auto ra = train_acoustic(*data, a, quick(15));
  const auto rb = train_acoustic(*data, b, quick(15));
  ASSERT_EQ(ra.history.size(), rb.history.size());
  for (std::size_t i = 0; i < ra.history.size(); ++i) {
    EXPECT_EQ(ra.history[i].loss.total, rb.history[i].loss.total) << i;
    EXPECT_EQ(ra.history[i].lr, rb.history[i].lr);
  }
}

TEST_F(ToyTraining, GradientsAreClippedToUnitNorm) {
  AcousticModel model(model_config());
  double seen_norm = 0.0;
  train_acoustic(*data, model, quick(1), [&](const StepLog& s) { seen_norm = s.grad_norm; });
  ASSERT_GT(seen_norm, 1.0);  // the first step of an untrained model is steep
  // Gradients were scaled by 1/seen_norm before the Adam step.
  EXPECT_NEAR(model.parameters().grad_norm(), 1.0, 1e-9);
}

TEST_F(ToyTraining, NonFiniteLossAbortsWithDump) {
  AcousticModel model(model_config());
  nn::Var w = model.parameters().get("decoder.mel_linear.bias");
  w.mutable_value()(0, 0) = std::numeric_limits<double>::quiet_NaN();
  testing::TempDir out;
  auto tc = quick(5);
  tc.output_dir = out.path();
  EXPECT_THROW(train_acoustic(*data, model, tc), NonFiniteLoss);
  ASSERT_TRUE(std::filesystem::exists(out / "nonfinite_step_1.json"));
  const auto dump = nlohmann::json::parse(io::read_text(out / "nonfinite_step_1.json"));
  EXPECT_EQ(dump["step"], 1);
  EXPECT_EQ(dump["non_finite_parameters"][0], "decoder.mel_linear.bias");
  EXPECT_EQ(dump["batch"].size(), 2u);
}

TEST_F(ToyTraining, RejectsEmptyDataAndSmallSpeakerTable) {
  AcousticModel model(model_config());
  EXPECT_THROW(train_acoustic({}, model, quick(1)), DataError);
  AcousticConfig c = model_config();
  c.n_speakers = 1;
  AcousticModel small(c);
  EXPECT_THROW(train_acoustic(*data, small, quick(1)), ConfigError);
}

}  // namespace
}  // namespace emotts::training
