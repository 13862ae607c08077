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

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "emotts/io/checkpoint.h"
#include "emotts/service/http.h"
#include "emotts/vocoder/hifigan.h"
#include "emotts/vocoder/wav.h"
#include "support/test_util.h"
#include "support/toy_bundle.h"
#include "support/torch_layout.h"

namespace emotts {
namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(EMOTTS_CLI) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) r.output += buf.data();
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string quoted(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::string model_dir() { return quoted(testing::shared_toy_bundle_dir()); }

TEST(Cli, SynthWritesPcm16Wav) {
  testing::TempDir dir;
  const auto r = run("synth --model-dir " + model_dir() +
                     " --text 'Keep an eye on him.' --speaker bea --emotion neutral --out " +
                     quoted(dir / "x.wav"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto h = vocoder::parse_wav_header(io::read_text(dir / "x.wav"));
  EXPECT_EQ(h.format_tag, 1);
  EXPECT_EQ(h.channels, 1);
  EXPECT_EQ(h.sample_rate, 22050u);
  EXPECT_EQ(h.bits_per_sample, 16);
  EXPECT_GT(h.data_bytes, 0u);
}

TEST(Cli, UnknownEmotionIsUsageErrorListingNames) {
  testing::TempDir dir;
  const auto r = run("synth --model-dir " + model_dir() + " --text hi --emotion joy --out " +
                     quoted(dir / "x.wav"));
  EXPECT_EQ(r.exit_code, 2);
  for (const char* name : {"amused", "anger", "disgust", "neutral", "sleepiness"}) {
    EXPECT_NE(r.output.find(name), std::string::npos) << r.output;
  }
  EXPECT_FALSE(std::filesystem::exists(dir / "x.wav"));
}

TEST(Cli, ClassifyPrintsDistribution) {
  const auto r = run("classify --model-dir " + model_dir() + " --text 'That joke was so funny!'");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  double total = 0.0;
  for (const char* name : {"amused", "anger", "disgust", "neutral", "sleepiness"}) {
    const auto pos = r.output.find(std::string(name) + " ");
    ASSERT_NE(pos, std::string::npos) << r.output;
    total += std::stod(r.output.substr(r.output.find_first_not_of(' ', pos + std::strlen(name))));
  }
  EXPECT_NEAR(total, 1.0, 1e-5);
  EXPECT_NE(r.output.find("predicted: "), std::string::npos);
}

TEST(Cli, UsageAndRuntimeExitCodes) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  EXPECT_EQ(run("synth --text hi").exit_code, 2);
  EXPECT_EQ(run("--help").exit_code, 0);
  testing::TempDir dir;
  const auto missing = run("synth --model-dir " + quoted(dir.path()) + " --text hi --out " +
                           quoted(dir / "x.wav"));
  EXPECT_EQ(missing.exit_code, 1);
  EXPECT_NE(missing.output.find("model_not_loaded"), std::string::npos) << missing.output;
  const auto speaker = run("synth --model-dir " + model_dir() +
                           " --text hi --speaker nobody --out " + quoted(dir / "x.wav"));
  EXPECT_EQ(speaker.exit_code, 1);
}

TEST(Cli, SynthMatchesServiceBytes) {
  testing::TempDir dir;
  const auto r = run("synth --model-dir " + model_dir() +
                     " --text 'The author is here.' --speaker josh --emotion amused --seed 5 --out " +
                     quoted(dir / "cli.wav"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const service::SynthesisService svc(testing::shared_toy_bundle(), {});
  const auto http = svc.synthesize(
      R"({"text":"The author is here.","speaker_id":"josh","emotion":"amused","seed":5})");
  ASSERT_EQ(http.status, 200);
  EXPECT_EQ(io::read_text(dir / "cli.wav"), http.body);
}

TEST(Cli, PreprocessTrainAndBench) {
  testing::TempDir dir;
  const auto corpus = testing::shared_toy_bundle_dir() / "corpus";
  auto r = run("preprocess --audio-dir " + quoted(corpus / "wavs") + " --textgrid-dir " +
               quoted(corpus / "textgrids") + " --metadata " + quoted(corpus / "metadata.txt") +
               " --out " + quoted(dir / "manifest"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("aligned 8 utterances"), std::string::npos) << r.output;

  r = run("train-acoustic --manifest " + quoted(dir / "manifest") + " --out " +
          quoted(dir / "model") + " --tiny 8 --steps 3 --warmup 2 --gender bea=female");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  for (const char* f : {"acoustic.ckpt", "speakers.json", "emotions.json", "audio.json",
                        "speaker_genders.json", "train_log.jsonl"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "model" / f)) << f;
  }

  r = run("train-classifier --data " + quoted(corpus / "classifier.tsv") + " --out " +
          quoted(dir / "model" / "classifier.ckpt") +
          " --epochs 2 --hidden 8 --feed-forward 16 --layers 1");
  ASSERT_EQ(r.exit_code, 0) << r.output;

  r = run("bench --model-dir " + quoted(dir / "model") + " --speaker bea --repeats 1 --out-dir " +
          quoted(dir / "reports"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("hardware: "), std::string::npos);
  for (const char* f : {"speakers.csv", "speakers.txt", "methods.csv", "rtf.csv", "results.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "reports" / f)) << f;
  }
  const auto log = nlohmann::json::parse(io::read_text(dir / "reports" / "results.json"));
  EXPECT_FALSE(log.at("hardware").at("descriptor").get<std::string>().empty());
  EXPECT_EQ(log.at("timings").size(), 3u);  // amused, neutral, classifier
}

TEST(Cli, ImportVocoderWritesLoadableCheckpoint) {
  testing::TempDir dir;
  vocoder::GeneratorConfig cfg;
  cfg.upsample_initial_channel = 16;
  cfg.n_mels = 8;
  const auto w = vocoder::random_generator_weights(cfg, 3);
  std::filesystem::create_directories(dir / "npy");
  testing::export_torch_layout(cfg, w, dir / "npy");
  io::write_text_atomic(dir / "gen.json", nlohmann::json(cfg).dump());
  io::write_text_atomic(dir / "npy" / "generator.json", nlohmann::json(cfg).dump());
  auto r = run("import-vocoder --npy-dir " + quoted(dir / "npy") + " --out " +
               quoted(dir / "vocoder.ckpt"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto [loaded_cfg, loaded] = vocoder::load_generator(dir / "vocoder.ckpt");
  EXPECT_EQ(nlohmann::json(loaded_cfg), nlohmann::json(cfg));
  const Eigen::MatrixXd mel = Eigen::MatrixXd::Constant(3, 8, -2.0);
  const Eigen::VectorXd a = vocoder::hifigan_generate<double>(mel, w, cfg);
  const Eigen::VectorXd b = vocoder::hifigan_generate<double>(mel, loaded, loaded_cfg);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);

  std::filesystem::remove(dir / "npy" / "conv_post.bias.npy");
  r = run("import-vocoder --npy-dir " + quoted(dir / "npy") + " --config " +
          quoted(dir / "gen.json") + " --out " + quoted(dir / "other.ckpt"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("conv_post.bias"), std::string::npos) << r.output;
}

}  // namespace
}  // namespace emotts
