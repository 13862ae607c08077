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

// Acceptance gate: one PASS/FAIL line per top-level criterion. Each check is
// a self-contained scenario with pinned tolerances and a wall-clock budget;
// the process exits non-zero if any check fails or overruns its budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emotts/acoustic/model.h"
#include "emotts/corpus/features.h"
#include "emotts/corpus/metadata.h"
#include "emotts/corpus/textgrid.h"
#include "emotts/dsp/spectral.h"
#include "emotts/emoclass/classifier.h"
#include "emotts/emoclass/train.h"
#include "emotts/eval/bench.h"
#include "emotts/eval/metrics.h"
#include "emotts/eval/report.h"
#include "emotts/io/checkpoint.h"
#include "emotts/pipeline/synthesizer.h"
#include "emotts/pipeline/toy_bundle.h"
#include "emotts/training/losses.h"
#include "emotts/training/schedule.h"
#include "emotts/training/trainer.h"
#include "emotts/vocoder/griffin_lim.h"
#include "emotts/vocoder/hifigan.h"
#include "emotts/vocoder/wav.h"
#include "support/datasets.h"
#include "support/gradcheck.h"
#include "support/test_util.h"
#include "support/toy_data.h"

namespace emotts {
namespace {

using nn::Matrix;

// Collects failed expectations for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void near(double actual, double expected, double tol, const std::string& what) {
    if (!(std::abs(actual - expected) <= tol)) {
      std::ostringstream s;
      s.precision(12);
      s << what << ": got " << actual << ", want " << expected << " +/- " << tol;
      failures_.push_back(s.str());
    }
  }
  void note(const std::string& n) { notes_.push_back(n); }

  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<void(Check&)> run;
};

// ------------------------------------------------------------------ fixtures

constexpr const char* kMetadataLine =
    "neutral_281-308_0287|bea|{K IY1 P AH0 N AY1 AA1 N HH IH1 M}|Keep an eye on him.|neutral";

constexpr const char* kAuthorGrid = R"(File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 1.06
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "phones"
        xmin = 0
        xmax = 1.06
        intervals: size = 3
        intervals [1]:
            xmin = 0
            xmax = 0.66
            text = "AO1"
        intervals [2]:
            xmin = 0.66
            xmax = 0.94
            text = "TH"
        intervals [3]:
            xmin = 0.94
            xmax = 1.06
            text = "ER0"
)";

std::vector<corpus::Interval> author_intervals() {
  return {{"AO1", 0.0, 0.66}, {"TH", 0.66, 0.94}, {"ER0", 0.94, 1.06}};
}

Eigen::VectorXd sine(double hz, int samples, int rate = 22050, double amp = 0.5) {
  Eigen::VectorXd x(samples);
  for (int i = 0; i < samples; ++i) x(i) = amp * std::sin(2.0 * std::numbers::pi * hz * i / rate);
  return x;
}

Waveform wave(std::vector<double> v, int rate = 22050) {
  Waveform w;
  w.sample_rate = rate;
  w.samples = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return w;
}

// ------------------------------------------------------------------- checks

void format_fidelity(Check& c) {
  const auto r = corpus::parse_metadata_line(kMetadataLine);
  c.expect(r.file_id == "neutral_281-308_0287", "file id");
  c.expect(r.speaker_id == "bea", "speaker id");
  c.expect(r.phonemes == std::vector<std::string>{"K", "IY1", "P", "AH0", "N", "AY1", "AA1", "N",
                                                  "HH", "IH1", "M"},
           "phoneme list");
  c.expect(r.text == "Keep an eye on him.", "text");
  c.expect(r.emotion.id == 3 && r.emotion.name() == "neutral", "emotion");
  c.expect(corpus::serialize_metadata(r) == kMetadataLine, "byte-identical round trip");

  const auto tiers = corpus::parse_textgrid(kAuthorGrid);
  const auto* phones = corpus::find_tier(tiers, "phones");
  c.expect(phones != nullptr && phones->intervals == author_intervals(),
           "author intervals (0,0.66) (0.66,0.94) (0.94,1.06)");
}

void duration_math(Check& c) {
  const corpus::IntervalTier author{"phones", author_intervals()};
  const auto d = corpus::intervals_to_frame_durations(author, 22050, 256);
  c.expect(d == std::vector<int>{57, 24, 10}, "author durations [57,24,10]");
  c.expect(std::accumulate(d.begin(), d.end(), 0) == 91, "author total 91 frames");

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> len(1e-3, 0.4);
  std::uniform_int_distribution<int> count(1, 60);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    corpus::IntervalTier tier{"phones", {}};
    double t = 0.0;
    for (int i = count(rng); i > 0; --i) {
      const double end = t + len(rng);
      tier.intervals.push_back({"A", t, end});
      t = end;
    }
    const auto f = corpus::intervals_to_frame_durations(tier, 22050, 256);
    long sum = 0;
    for (int x : f) {
      if (x < 0) ++bad;
      sum += x;
    }
    if (sum != std::lround(t * 22050 / 256)) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " of 1000 random tiers violate telescoping");
  c.note("1000 tiers");
}

void length_regulator(Check& c) {
  acoustic::AcousticConfig cfg = acoustic::AcousticConfig::tiny(8, 6);
  cfg.seed = 3;
  acoustic::AcousticModel model(cfg);
  // Without the pitch/energy embeddings the expanded rows are exact copies
  // of the encoder rows, which identifies the source phoneme of every frame.
  for (const auto& [name, var] : model.parameters().entries()) {
    if (name.rfind("variance.pitch_embedding", 0) == 0 ||
        name.rfind("variance.energy_embedding", 0) == 0) {
      nn::Var v = var;
      v.mutable_value().setZero();
    }
  }
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(1, 16);
  std::uniform_int_distribution<int> dur(0, 8);
  int length_bad = 0;
  int content_bad = 0;
  int zero_phonemes = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = len(rng);
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int& v : d) v = dur(rng);
    if (std::accumulate(d.begin(), d.end(), 0) == 0) d[0] = 1;
    zero_phonemes += static_cast<int>(std::count(d.begin(), d.end(), 0));
    Matrix rows(n, 8);
    for (int i = 0; i < n; ++i) rows.row(i).setConstant(i + 1.0);
    acoustic::VarianceTargets t;
    t.durations = d;
    t.pitch = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
    t.energy = Eigen::VectorXd::LinSpaced(n, 0.5, -0.5);
    auto [expanded, out] = model.variance_adapt(nn::constant(rows), n, &t, nn::ForwardContext{});
    const int sum = std::accumulate(d.begin(), d.end(), 0);
    if (expanded.rows() != sum) {
      ++length_bad;
      continue;
    }
    Eigen::Index r = 0;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d[static_cast<std::size_t>(i)]; ++k, ++r) {
        if (expanded.value().row(r) != rows.row(i)) ++content_bad;
      }
    }
  }
  c.expect(length_bad == 0, std::to_string(length_bad) + " vectors with wrong expanded length");
  c.expect(content_bad == 0, std::to_string(content_bad) + " frames from the wrong phoneme");
  c.note("1000 vectors, " + std::to_string(zero_phonemes) + " zero-duration phonemes");
}

void loss_suite(Check& c) {
  const Eigen::RowVector2d pred(1, 3);
  const Eigen::RowVector2d truth(2, 5);
  c.near(training::l1_loss(pred, truth), 1.5, 1e-12, "l1([1,3],[2,5])");
  c.near(training::mse_loss(pred, truth), 2.5, 1e-12, "mse([1,3],[2,5])");
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const double p[5] = {u(rng), u(rng), u(rng), u(rng), u(rng)};
    const auto b = training::LossBreakdown::from_components(p[0], p[1], p[2], p[3], p[4]);
    const double sum = p[0] + p[1] + p[2] + p[3] + p[4];
    if (std::abs(b.total - sum) > 1e-12 * sum) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " of 100 breakdowns whose total is not the sum");
}

void gradient_integrity(Check& c) {
  acoustic::AcousticConfig cfg = acoustic::AcousticConfig::tiny(8, 4);
  cfg.seed = 21;
  cfg.n_speakers = 2;
  acoustic::AcousticModel model(cfg);
  training::UtteranceTargets t;
  t.input = acoustic::AcousticInput{{10, 20, 30}, 1, 2};
  t.variance.durations = {2, 1, 3};
  t.variance.pitch = Eigen::VectorXd::LinSpaced(3, -1, 1);
  t.variance.energy = Eigen::VectorXd::LinSpaced(3, 2, 0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(-2.0, 1.0);
  t.mel = Matrix::NullaryExpr(6, cfg.n_mels, [&] { return g(rng); });
  const auto report = testing::gradcheck(model.parameters(), [&] {
    return training::total_loss(model.forward(t.input, &t.variance, nn::ForwardContext{}), t).total;
  });
  const double worst = testing::worst_relative_error(report, 1e-9);
  c.expect(worst < 1e-4, "worst relative error " + std::to_string(worst));
  std::ostringstream s;
  s << report.size() << " tensors, worst rel err " << std::scientific << worst;
  c.note(s.str());
}

void overfit_sanity(Check& c) {
  testing::TempDir dir;
  const auto data = testing::toy_dataset(dir, 2);
  c.expect(data.size() == 2, "two aligned utterances");
  auto run = [&] {
    acoustic::AcousticConfig cfg = acoustic::AcousticConfig::tiny(16, 80);
    cfg.seed = 4;
    acoustic::AcousticModel model(cfg);
    training::AcousticTrainConfig tc;
    tc.steps = 500;
    tc.optimizer.warmup = 50;
    tc.seed = 9;
    return training::train_acoustic(data, model, tc).history;
  };
  const auto a = run();
  const auto b = run();
  c.expect(a.size() == 500 && b.size() == 500, "500 logged steps");
  if (a.empty() || b.size() != a.size()) return;
  const double first = a.front().loss.total;
  const double last = a.back().loss.total;
  const double reduction = 1.0 - last / first;
  c.expect(reduction > 0.9, "total-loss reduction " + std::to_string(reduction));
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i) same = same && a[i].loss.total == b[i].loss.total;
  c.expect(same, "second seeded run reproduces the loss curve exactly");
  std::ostringstream s;
  s.precision(3);
  s << "loss " << first << " -> " << last << " (" << 100.0 * reduction << "% reduction)";
  c.note(s.str());
}

void classifier(Check& c) {
  const auto data = testing::keyword_dataset(200, 5);
  emoclass::ClassifierTrainConfig cfg;
  cfg.epochs = 50;
  cfg.seed = 1;
  const auto result = emoclass::train_classifier(data, cfg);
  const double best_f1 = std::accumulate(
      result.history.begin(), result.history.end(), 0.0,
      [](double m, const auto& e) { return std::max(m, e.macro_f1); });
  c.expect(best_f1 > 0.95, "training macro-F1 " + std::to_string(best_f1));

  double worst_sum = 0.0;
  for (const auto& ex : data) {
    const auto out = result.model->classify(text::tokenize_for_classifier(ex.text, result.vocab));
    const double s = std::accumulate(out.probs.begin(), out.probs.end(), 0.0);
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
  }
  c.expect(worst_sum <= 1e-6, "softmax row sum off by " + std::to_string(worst_sum));

  auto seq = text::tokenize_for_classifier(data[0].text, result.vocab);
  const auto before = result.model->classify(seq);
  std::mt19937 rng(1);
  const int valid = seq.length();
  for (std::size_t i = static_cast<std::size_t>(valid); i < seq.ids.size(); ++i) {
    seq.ids[i] = 4 + static_cast<int>(rng() % static_cast<unsigned>(result.vocab.size() - 4));
  }
  const auto after = result.model->classify(seq);
  c.expect(before.logits == after.logits && before.probs == after.probs,
           "pad positions change the output");
  c.note("macro-F1 " + std::to_string(best_f1).substr(0, 5));
}

std::shared_ptr<const pipeline::ModelBundle> toy_bundle(const testing::TempDir& dir) {
  pipeline::ToyBundleOptions opts;
  opts.utterances = 8;
  opts.acoustic_steps = 20;
  opts.classifier_epochs = 5;
  pipeline::build_toy_bundle(dir.path(), opts);
  return pipeline::load_bundle(pipeline::BundlePaths::from_directory(dir.path()));
}

void conditioning_effect(Check& c) {
  testing::TempDir dir;
  const auto bundle = toy_bundle(dir);
  const pipeline::Synthesizer synth(bundle);
  pipeline::SynthesisRequest req{"Keep an eye on him.", "bea", pipeline::EmotionChoice::manual(3), 0, 1.0, {}};
  const auto neutral = synth.synthesize(req);
  req.emotion = pipeline::EmotionChoice::manual(0);
  req.durations = neutral.diagnostics.durations;
  const auto amused = synth.synthesize(req);
  const auto& ma = amused.diagnostics.mel;
  const auto& mn = neutral.diagnostics.mel;
  const bool same_shape = ma.rows() == mn.rows() && ma.cols() == mn.cols();
  c.expect(same_shape, "mel shape changed with the emotion");
  const double l1 = same_shape ? (ma - mn).cwiseAbs().mean() : 0.0;
  c.expect(l1 > 0.0, "mel unchanged by the emotion id");

  auto forced = std::make_shared<pipeline::ModelBundle>(*bundle);
  forced->classifier = std::make_shared<emoclass::FunctionBackend>("forced", [](std::string_view) {
    std::array<double, kNumEmotions> p{};
    p[3] = 1.0;
    return std::make_pair(p, Eigen::VectorXd(Eigen::VectorXd::Zero(4)));
  });
  const pipeline::Synthesizer forced_synth(forced);
  pipeline::SynthesisRequest manual{"Keep an eye on him.", "bea", pipeline::EmotionChoice::manual(3), 0, 1.0, {}};
  pipeline::SynthesisRequest automatic = manual;
  automatic.emotion = pipeline::EmotionChoice::detect();
  const auto wm = vocoder::encode_wav(forced_synth.synthesize(manual).waveform);
  const auto wa_result = forced_synth.synthesize(automatic);
  c.expect(wa_result.diagnostics.emotion.id == 3, "auto mode resolved to 3");
  c.expect(vocoder::encode_wav(wa_result.waveform) == wm, "manual 3 and auto->3 WAV bytes differ");
  std::ostringstream s;
  s << mn.rows() << "x" << mn.cols() << " mel, mean L1 " << l1;
  c.note(s.str());
}

void vocoder_laws(Check& c) {
  const dsp::AudioConfig audio;
  vocoder::GeneratorConfig gen;
  gen.upsample_initial_channel = 32;
  gen.n_mels = 80;
  const auto weights = vocoder::random_generator_weights(gen, 7).cast<float>();
  for (int frames : {1, 7, 91}) {
    const Eigen::MatrixXd mel = Eigen::MatrixXd::Constant(frames, 80, -4.0);
    const auto gl = vocoder::griffin_lim<double>(mel, audio, {4, 0});
    c.expect(gl.size() == frames * 256, "Griffin-Lim length for " + std::to_string(frames));
    const auto hf = vocoder::hifigan_generate<float>(mel.cast<float>(), weights, gen);
    c.expect(hf.size() == frames * 256, "HiFi-GAN length for " + std::to_string(frames));
  }

  const auto mel = corpus::extract_mel(sine(440.0, 22050), audio);
  const Eigen::VectorXd y = vocoder::griffin_lim<double>(mel.values, audio, {32, 0});
  const Eigen::MatrixXd spec = dsp::magnitude_spectrogram(y, audio);
  Eigen::Index peak = 0;
  spec.colwise().sum().maxCoeff(&peak);
  const double expected = 440.0 * audio.n_fft / audio.sample_rate;
  c.near(static_cast<double>(peak), expected, 1.0, "Griffin-Lim dominant bin for 440 Hz");

  Waveform ramp;
  ramp.sample_rate = 22050;
  ramp.samples = Eigen::VectorXd::LinSpaced(22050, -1.0, 1.0);
  const Waveform back = vocoder::decode_wav(vocoder::encode_wav(ramp));
  const double err = back.samples.size() == ramp.samples.size()
                         ? (back.samples - ramp.samples).cwiseAbs().maxCoeff()
                         : 1.0;
  c.expect(err <= 1.0 / 32768.0, "WAV round-trip error " + std::to_string(err));
  c.note("440 Hz peak bin " + std::to_string(peak) + " (expected " +
         std::to_string(expected).substr(0, 5) + ")");
}

void evaluation_harness(Check& c) {
  const auto a = wave({0.1, -0.2, 0.3});
  c.expect(eval::rmse_waveforms(a, a).rmse == 0.0, "rmse(a, a) != 0");
  c.near(eval::rmse_waveforms(wave({0.5, -0.5}), wave({-0.5, 0.5})).rmse, 1.0, 1e-12,
         "rmse([0.5,-0.5], negation)");
  const auto padded = eval::rmse_waveforms(wave({0.1, 0.2, 0.3}), wave({0.1, 0.2, 0.3, 0.0, 0.0}));
  c.expect(padded.padded && padded.rmse == 0.0, "trailing zeros count as padding");
  c.near(eval::rmse_waveforms(wave({1.0}), wave({1.0, 0.0, 0.0, 2.0})).rmse, 1.0, 1e-12,
         "shorter signal padded at the end");

  testing::TempDir dir;
  const auto bundle = toy_bundle(dir);
  const pipeline::Synthesizer synth(bundle);
  const auto results = eval::run_benchmark(synth, {"bea"}, {"neutral"},
                                           {{"0287", "Keep an eye on him."}}, 3);
  const auto hw = eval::detect_hardware();
  const auto row = eval::summarize_rtf(results, "toy", bundle->vocoder->name(), hw);
  c.expect(row.rtf > 0.0 && std::isfinite(row.rtf), "measured RTF");
  const auto rtf_table = eval::rtf_table({row});
  eval::emit_report(rtf_table, dir / "reports", "rtf");
  eval::write_result_log(dir / "reports" / "results.json", hw, results, {}, {row});
  const auto text = io::read_text(dir / "reports" / "rtf.txt");
  c.expect(text.find(hw.descriptor()) != std::string::npos, "RTF report carries hardware");
  const auto log = nlohmann::json::parse(io::read_text(dir / "reports" / "results.json"));
  c.expect(log.at("hardware").at("logical_cores").get<int>() > 0, "result log hardware cores");

  // Published rows are loaded and rendered, never compared to measurements.
  const auto ref = eval::load_reference_results(testing::data_dir() / "reference" /
                                                "published_results.json");
  const auto ref_rtf = eval::rtf_table(ref.rtf);
  c.expect(!ref_rtf.rows.empty() && ref_rtf.header == rtf_table.header,
           "reference RTF rows render in the same table format");
  c.expect(eval::rmse_table(ref.rmse).rows.size() == ref.rmse.size(), "reference RMSE table");
  std::ostringstream s;
  s.precision(3);
  s << "toy RTF " << row.rtf << " on " << hw.descriptor();
  c.note(s.str());
}

void schedule(Check& c) {
  const training::OptimizerConfig cfg;
  c.near(training::lr_at(4000, cfg), 9.882e-4, 1e-7, "lr_at(4000)");
  training::OptimizerConfig flat = cfg;
  flat.anneal_steps.clear();
  c.near(training::lr_at(450000, cfg) / training::lr_at(450000, flat), 0.09, 1e-12,
         "anneal factor at 450000");
  bool monotone = true;
  for (long s = 1; s < 4000; ++s) monotone = monotone && training::lr_at(s, cfg) < training::lr_at(s + 1, cfg);
  c.expect(monotone, "warmup is strictly increasing over 1..4000");
}

}  // namespace
}  // namespace emotts

int main() {
  using namespace emotts;
  const std::vector<Criterion> criteria = {
      {"format fidelity", 1.0, format_fidelity},
      {"duration math", 5.0, duration_math},
      {"length regulator", 5.0, length_regulator},
      {"loss suite", 1.0, loss_suite},
      {"gradient integrity", 120.0, gradient_integrity},
      {"overfit sanity", 600.0, overfit_sanity},
      {"classifier", 300.0, classifier},
      {"conditioning effect", 60.0, conditioning_effect},
      {"vocoder laws", 60.0, vocoder_laws},
      {"evaluation harness", 60.0, evaluation_harness},
      {"schedule", 1.0, schedule},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& k = criteria[i];
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      k.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > k.budget_seconds) {
      check.expect(false, "took " + std::to_string(seconds) + " s, budget " +
                              std::to_string(k.budget_seconds) + " s");
    }
    const bool ok = check.failures().empty();
    if (!ok) ++failed;
    std::string detail;
    for (const auto& n : check.notes()) detail += (detail.empty() ? "" : "; ") + n;
    for (const auto& f : check.failures()) detail += (detail.empty() ? "" : "; ") + f;
    std::printf("%s [%2zu] %-20s %7.2fs  %s\n", ok ? "PASS" : "FAIL", i + 1, k.name, seconds,
                detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
              criteria.size());
  return failed == 0 ? 0 : 1;
}
