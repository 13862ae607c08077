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

#include <filesystem>

#include "emotts/errors.h"
#include "emotts/eval/bench.h"
#include "emotts/io/checkpoint.h"
#include "emotts/pipeline/synthesizer.h"
#include "emotts/pipeline/toy_bundle.h"
#include "emotts/vocoder/wav.h"
#include "support/test_util.h"
#include "support/toy_bundle.h"

namespace emotts::pipeline {
namespace {

constexpr const char* kText = "Keep an eye on him.";

class PipelineTest : public ::testing::Test {
 protected:
  static std::filesystem::path dir() { return emotts::testing::shared_toy_bundle_dir(); }
  static std::shared_ptr<const ModelBundle> bundle() { return emotts::testing::shared_toy_bundle(); }

  // Same models with the classifier replaced by one that always answers `id`.
  static std::shared_ptr<const ModelBundle> forced_classifier(int id) {
    auto copy = std::make_shared<ModelBundle>(*bundle());
    copy->classifier = std::make_shared<emoclass::FunctionBackend>(
        "forced", [id](std::string_view) {
          std::array<double, kNumEmotions> p{};
          p[static_cast<std::size_t>(id)] = 1.0;
          return std::make_pair(p, Eigen::VectorXd(Eigen::VectorXd::Zero(4)));
        });
    return copy;
  }

  static SynthesisRequest request(EmotionChoice emotion = EmotionChoice::manual(3)) {
    return {kText, "bea", emotion, 0, 1.0, {}};
  }
};

TEST_F(PipelineTest, BundleDirectoryLayout) {
  for (const char* f : {"acoustic.ckpt", "classifier.ckpt", "speakers.json", "emotions.json",
                        "speaker_genders.json", "audio.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir() / f)) << f;
  }
  EXPECT_EQ(io::read_text(dir() / "emotions.json"),
            "{\"amused\": 0, \"anger\": 1, \"disgust\": 2, \"neutral\": 3, \"sleepiness\": 4}\n");
  const auto& b = *bundle();
  EXPECT_EQ(b.speakers.names(), (std::vector<std::string>{"bea", "jenie", "josh", "sam"}));
  EXPECT_EQ(b.gender("jenie"), "female");
  EXPECT_EQ(b.gender("sam"), "male");
  EXPECT_EQ(b.gender("nobody"), "unknown");
  EXPECT_NE(b.classifier, nullptr);
  EXPECT_EQ(b.vocoder->name(), "griffin_lim");
}

TEST_F(PipelineTest, MissingOrInconsistentFiles) {
  emotts::testing::TempDir empty;
  EXPECT_THROW(load_bundle(BundlePaths::from_directory(empty.path())), ModelNotLoaded);

  auto paths = BundlePaths::from_directory(dir());
  paths.speakers = empty / "speakers.json";
  EXPECT_THROW(load_bundle(paths), MissingAsset);

  paths = BundlePaths::from_directory(dir());
  io::write_text_atomic(empty / "emotions.json", "{\"amused\": 1}");
  paths.emotions = empty / "emotions.json";
  EXPECT_THROW(load_bundle(paths), ConfigError);

  paths = BundlePaths::from_directory(dir(), "neural");
  EXPECT_THROW(load_bundle(paths), ModelNotLoaded);
}

TEST_F(PipelineTest, SynthesizesReferenceSentence) {
  const Synthesizer synth(bundle());
  const auto r = synth.synthesize(request());
  const auto& d = r.diagnostics;
  EXPECT_EQ(d.normalized_text, "keep an eye on him.");
  EXPECT_EQ(d.word_count, 5);
  EXPECT_EQ(d.phonemes, (std::vector<std::string>{"K", "IY1", "P", "AH0", "N", "AY1", "AA1", "N",
                                                  "HH", "IH1", "M"}));
  EXPECT_EQ(d.emotion.id, 3);
  EXPECT_FALSE(d.automatic);
  EXPECT_FALSE(d.classifier.has_value());
  ASSERT_EQ(d.durations.size(), 11u);
  EXPECT_EQ(d.log_durations.size(), 11);
  EXPECT_EQ(d.pitch.size(), 11);
  int frames = 0;
  for (int f : d.durations) frames += f;
  EXPECT_EQ(d.mel.rows(), frames);
  EXPECT_EQ(d.mel.cols(), 80);
  EXPECT_EQ(r.waveform.samples.size(), frames * 256);
  EXPECT_EQ(r.waveform.sample_rate, 22050);
  EXPECT_TRUE(r.waveform.samples.allFinite());
  EXPECT_GE(d.timings.total, d.timings.vocoder);
}

TEST_F(PipelineTest, DeterministicForFixedSeed) {
  const Synthesizer synth(bundle());
  const auto a = vocoder::encode_wav(synth.synthesize(request()).waveform);
  const auto b = vocoder::encode_wav(synth.synthesize(request()).waveform);
  EXPECT_EQ(a, b);
}

TEST_F(PipelineTest, ManualAndForcedAutoGiveIdenticalAudio) {
  const Synthesizer forced(forced_classifier(3));
  const auto manual = forced.synthesize(request(EmotionChoice::manual(3)));
  const auto automatic = forced.synthesize(request(EmotionChoice::detect()));
  EXPECT_TRUE(automatic.diagnostics.automatic);
  EXPECT_EQ(automatic.diagnostics.emotion.id, 3);
  ASSERT_TRUE(automatic.diagnostics.classifier.has_value());
  EXPECT_EQ(vocoder::encode_wav(manual.waveform), vocoder::encode_wav(automatic.waveform));
}

TEST_F(PipelineTest, EmotionReachesTheMel) {
  const Synthesizer synth(bundle());
  const auto neutral = synth.synthesize(request(EmotionChoice::manual(3)));
  auto req = request(EmotionChoice::manual(0));
  req.durations = neutral.diagnostics.durations;
  const auto amused = synth.synthesize(req);
  ASSERT_EQ(amused.diagnostics.mel.rows(), neutral.diagnostics.mel.rows());
  EXPECT_GT((amused.diagnostics.mel - neutral.diagnostics.mel).cwiseAbs().sum(), 0.0);
}

TEST_F(PipelineTest, RequestErrors) {
  const Synthesizer synth(bundle());
  auto req = request();
  req.text = "  ...  ";
  EXPECT_THROW(synth.synthesize(req), SynthesisError);
  req = request();
  req.speaker = "nobody";
  EXPECT_THROW(synth.synthesize(req), UnknownSpeaker);
  req = request(EmotionChoice::manual(7));
  EXPECT_THROW(synth.synthesize(req), UnknownEmotion);

  auto no_classifier = std::make_shared<ModelBundle>(*bundle());
  no_classifier->classifier = nullptr;
  EXPECT_THROW(Synthesizer(no_classifier).synthesize(request(EmotionChoice::detect())),
               ModelNotLoaded);
}

TEST_F(PipelineTest, EmotionChoiceParsing) {
  EXPECT_TRUE(EmotionChoice::parse("auto").automatic);
  EXPECT_EQ(EmotionChoice::parse("sleepiness").id, 4);
  try {
    EmotionChoice::parse("joy");
    FAIL();
  } catch (const UnknownEmotion& e) {
    const std::string msg = e.what();
    for (auto n : kEmotionNames) EXPECT_NE(msg.find(n), std::string::npos) << msg;
  }
}

TEST_F(PipelineTest, TimingAndBenchmarkRows) {
  const Synthesizer synth(bundle());
  const auto t = eval::time_synthesis(synth, request(), 3, "0001");
  EXPECT_EQ(t.repeats, 3);
  EXPECT_GT(t.wall_seconds, 0.0);
  EXPECT_GT(t.audio_seconds, 0.0);
  EXPECT_GT(t.rtf(), 0.0);
  EXPECT_EQ(t.gender, "female");
  EXPECT_EQ(t.word_count, 5);
  EXPECT_EQ(t.method, eval::EmotionMethod::kManual);

  const auto rows = eval::run_benchmark(synth, {"bea", "josh"}, {"amused", "neutral"},
                                        {{"0001", kText}}, 1);
  ASSERT_EQ(rows.size(), 6u);  // 2 speakers x (2 manual + 1 classifier)
  EXPECT_EQ(rows[2].method, eval::EmotionMethod::kClassifier);
  const auto rtf = eval::summarize_rtf(rows, "toy", "griffin_lim", eval::detect_hardware());
  EXPECT_GT(rtf.rtf, 0.0);
  EXPECT_TRUE(std::isfinite(rtf.rtf));
}

}  // namespace
}  // namespace emotts::pipeline
