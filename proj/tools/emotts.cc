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

// Command-line front end: corpus preprocessing, training, synthesis,
// classification, benchmarking and the HTTP service.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "emotts/corpus/dataset.h"
#include "emotts/emoclass/train.h"
#include "emotts/errors.h"
#include "emotts/eval/bench.h"
#include "emotts/eval/report.h"
#include "emotts/io/checkpoint.h"
#include "emotts/pipeline/bundle.h"
#include "emotts/pipeline/synthesizer.h"
#include "emotts/service/config.h"
#include "emotts/service/http.h"
#include "emotts/training/trainer.h"
#include "emotts/vocoder/hifigan.h"
#include "emotts/vocoder/wav.h"

namespace {

namespace fs = std::filesystem;
using namespace emotts;

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

std::string emotion_names() {
  std::string out;
  for (auto n : kEmotionNames) out += (out.empty() ? "" : ", ") + std::string(n);
  return out;
}

// CLI11 validator accepting "auto" or one of the five names.
const CLI::Validator kEmotionValidator(
    [](std::string& value) -> std::string {
      if (value == "auto" || EmotionLabel::find(value)) return {};
      return "unknown emotion '" + value + "'; valid: auto, " + emotion_names();
    },
    "auto|EMOTION");

// ---------------------------------------------------------------- preprocess

struct PreprocessArgs {
  fs::path audio_dir, textgrid_dir, metadata, out;
  bool lenient = false;
  int threads = 0;
};

int run_preprocess(const PreprocessArgs& a) {
  corpus::DatasetConfig cfg;
  cfg.strict = !a.lenient;
  cfg.threads = a.threads;
  const auto data = corpus::build_dataset(a.audio_dir, a.textgrid_dir, a.metadata, cfg);
  corpus::write_manifest(a.out, data, cfg.audio);
  long frames = 0;
  for (const auto& u : data.utterances) frames += u.total_frames();
  std::cout << "aligned " << data.utterances.size() << " utterances (" << frames << " frames) -> "
            << a.out.string() << "\n";
  for (const auto& issue : data.issues) {
    std::cout << "skipped " << issue.file_id << " [" << issue.code << "] " << issue.message << "\n";
  }
  for (const auto& l : data.lint) {
    std::cout << "lint " << l.file_id << ": leading " << l.leading_silence << " s, trailing "
              << l.trailing_silence << " s\n";
  }
  return 0;
}

// ---------------------------------------------------------- train-classifier

struct ClassifierArgs {
  fs::path data, out;
  emoclass::ClassifierTrainConfig cfg;
};

int run_train_classifier(const ClassifierArgs& a) {
  const auto data = emoclass::load_labeled_tsv(a.data);
  const auto result = emoclass::train_classifier(data, a.cfg);
  for (const auto& m : result.history) {
    std::printf("epoch %3d  loss %.4f  macro-F1 %.4f  accuracy %.4f\n", m.epoch, m.loss,
                m.macro_f1, m.accuracy);
  }
  emoclass::save_classifier(a.out, *result.model, result.vocab);
  std::cout << "saved " << a.out.string() << "\n";
  return 0;
}

// ------------------------------------------------------------ train-acoustic

struct AcousticArgs {
  fs::path manifest, out, config;
  int tiny = 0;
  long log_every = 50;
  std::vector<std::string> genders;  // name=gender
  training::AcousticTrainConfig cfg;
};

int run_train_acoustic(AcousticArgs a) {
  const auto manifest = corpus::read_manifest(a.manifest);
  acoustic::AcousticConfig model_cfg;
  if (!a.config.empty()) {
    model_cfg = nlohmann::json::parse(io::read_text(a.config)).get<acoustic::AcousticConfig>();
  } else if (a.tiny > 0) {
    model_cfg = acoustic::AcousticConfig::tiny(a.tiny, manifest.audio.n_mels);
  }
  model_cfg.n_mels = manifest.audio.n_mels;
  model_cfg.seed = a.cfg.seed;
  acoustic::AcousticModel model(model_cfg);
  a.cfg.output_dir = a.out;
  const long every = std::max<long>(1, a.log_every);
  training::train_acoustic(manifest.utterances, model, a.cfg, [&](const training::StepLog& s) {
    if (s.step % every == 0 || s.step == 1 || s.step == a.cfg.steps) {
      std::printf("step %6ld  lr %.3e  loss %.5f  grad %.3f\n", s.step, s.lr, s.loss.total,
                  s.grad_norm);
    }
  });
  pipeline::write_emotions_json(a.out / "emotions.json");
  io::write_text_atomic(a.out / "audio.json", nlohmann::json(manifest.audio).dump(2) + "\n");
  if (!a.genders.empty()) {
    std::map<std::string, std::string> genders;
    for (const auto& g : a.genders) {
      const auto eq = g.find('=');
      if (eq == std::string::npos) throw ConfigError("--gender expects name=gender, got '" + g + "'");
      genders[g.substr(0, eq)] = g.substr(eq + 1);
    }
    pipeline::write_genders_json(a.out / "speaker_genders.json", genders);
  }
  std::cout << "saved " << (a.out / "acoustic.ckpt").string() << "\n";
  return 0;
}

// --------------------------------------------------------------------- synth

struct ModelArgs {
  fs::path model_dir;
  std::string vocoder = "griffin_lim";
  fs::path vocoder_checkpoint;

  std::shared_ptr<const pipeline::ModelBundle> load() const {
    auto paths = pipeline::BundlePaths::from_directory(model_dir, vocoder);
    if (!vocoder_checkpoint.empty()) paths.vocoder = vocoder_checkpoint;
    return pipeline::load_bundle(paths);
  }
};

struct SynthArgs {
  ModelArgs model;
  std::string text, speaker, emotion = "auto", out;
  std::uint64_t seed = 0;
  double duration_scale = 1.0;
};

int run_synth(const SynthArgs& a) {
  const pipeline::Synthesizer synth(a.model.load());
  pipeline::SynthesisRequest req;
  req.text = a.text;
  req.speaker = a.speaker.empty() ? synth.bundle().speakers.name(0) : a.speaker;
  req.emotion = pipeline::EmotionChoice::parse(a.emotion);
  req.seed = a.seed;
  req.duration_scale = a.duration_scale;
  const auto r = synth.synthesize(req);
  vocoder::write_wav(r.waveform, a.out);
  const auto& d = r.diagnostics;
  std::printf("%s: %.3f s of audio, speaker %s, emotion %s (%s), %zu phonemes, %.3f s wall\n",
              a.out.c_str(), r.waveform.seconds(), req.speaker.c_str(),
              std::string(d.emotion.name()).c_str(), d.automatic ? "auto" : "manual",
              d.phonemes.size(), d.timings.total);
  if (!d.oov_words.empty()) {
    std::cout << "letter-fallback words:";
    for (const auto& w : d.oov_words) std::cout << ' ' << w;
    std::cout << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ classify

struct ClassifyArgs {
  fs::path model_dir, classifier;
  std::string text;
};

int run_classify(const ClassifyArgs& a) {
  const fs::path path = a.classifier.empty() ? a.model_dir / "classifier.ckpt" : a.classifier;
  if (!fs::exists(path)) throw ModelNotLoaded("classifier checkpoint not found: " + path.string());
  const auto backend = emoclass::load_classifier(path);
  const auto out = backend->classify_text(a.text);
  for (int i = 0; i < kNumEmotions; ++i) {
    std::printf("%-10s %.6f\n", std::string(kEmotionNames[static_cast<std::size_t>(i)]).c_str(),
                out.probs[static_cast<std::size_t>(i)]);
  }
  std::cout << "predicted: " << out.predicted.name() << "\n";
  return 0;
}

// --------------------------------------------------------------------- bench

struct BenchArgs {
  ModelArgs model;
  std::vector<std::string> speakers;
  std::vector<std::string> emotions = {"amused", "neutral"};
  std::vector<std::string> texts = {"Keep an eye on him."};
  int repeats = 5;
  fs::path out_dir = "bench";
  fs::path reference;
};

int run_bench(const BenchArgs& a) {
  const pipeline::Synthesizer synth(a.model.load());
  auto speakers = a.speakers.empty() ? synth.bundle().speakers.names() : a.speakers;
  std::vector<eval::BenchmarkCase> cases;
  for (std::size_t i = 0; i < a.texts.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "%04zu", i + 1);
    cases.push_back({id, a.texts[i]});
  }
  const auto hw = eval::detect_hardware();
  const auto results = eval::run_benchmark(synth, speakers, a.emotions, cases, a.repeats);

  std::vector<eval::TimingResult> manual;
  for (const auto& r : results) {
    if (r.method == eval::EmotionMethod::kManual) manual.push_back(r);
  }
  eval::TableOptions speaker_opts;
  speaker_opts.expected_emotions = a.emotions;
  const auto speaker_table = eval::timing_table(manual, speaker_opts);
  eval::TableOptions method_opts;
  method_opts.include_method = true;
  const auto method_table = eval::timing_table(results, method_opts);

  std::vector<eval::RtfRow> rtf = {
      eval::summarize_rtf(results, "emotts", synth.bundle().vocoder->name(), hw)};
  if (!a.reference.empty()) {
    for (auto row : eval::load_reference_results(a.reference).rtf) {
      row.system += " (published)";
      rtf.push_back(row);
    }
  }
  const auto rtf_table = eval::rtf_table(rtf);

  eval::emit_report(speaker_table, a.out_dir, "speakers");
  eval::emit_report(method_table, a.out_dir, "methods");
  eval::emit_report(rtf_table, a.out_dir, "rtf");
  eval::write_result_log(a.out_dir / "results.json", hw, results, {}, rtf);

  std::cout << "hardware: " << hw.descriptor() << "\n\n"
            << eval::render_text(method_table) << "\n"
            << eval::render_text(rtf_table) << "\nreports written to " << a.out_dir.string()
            << "\n";
  return 0;
}

// ------------------------------------------------------------ import-vocoder

struct ImportVocoderArgs {
  std::string npy_dir;
  std::string out;
  std::string config;
};

int run_import_vocoder(const ImportVocoderArgs& a) {
  vocoder::GeneratorConfig cfg;
  std::filesystem::path config = a.config;
  if (config.empty() && std::filesystem::exists(std::filesystem::path(a.npy_dir) / "generator.json")) {
    config = std::filesystem::path(a.npy_dir) / "generator.json";
  }
  if (!config.empty()) {
    cfg = nlohmann::json::parse(io::read_text(config)).get<vocoder::GeneratorConfig>();
  }
  cfg.validate();
  const auto weights = vocoder::import_generator_npy(a.npy_dir, cfg);
  vocoder::save_generator(a.out, cfg, weights);
  std::cout << "wrote " << a.out << " (" << weights_to_tensors(cfg, weights).size()
            << " tensors)\n";
  return 0;
}

// -------------------------------------------------------------------- serve

struct ServeArgs {
  fs::path config;
  fs::path model_dir;
  std::string host;
  int port = -1;
  int workers = -1;
  std::string vocoder;
};

emotts::service::HttpServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

int run_serve(const ServeArgs& a) {
  auto cfg = a.config.empty() ? service::ServiceConfig{} : service::ServiceConfig::load(a.config);
  if (!a.model_dir.empty()) cfg.model_dir = a.model_dir;
  if (!a.host.empty()) cfg.host = a.host;
  if (a.port >= 0) cfg.port = a.port;
  if (a.workers >= 0) cfg.workers = a.workers;
  if (!a.vocoder.empty()) cfg.vocoder_kind = a.vocoder;
  cfg.apply_environment();
  cfg.validate();
  auto service = std::make_shared<service::SynthesisService>(
      pipeline::load_bundle(cfg.bundle_paths()), cfg);
  service::HttpServer server(service);
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  server.listen(cfg.host, cfg.port, [&](int port) {
    std::cout << "listening on http://" << cfg.host << ":" << port << " ("
              << cfg.worker_count() << " workers)" << std::endl;
  });
  g_server = nullptr;
  return 0;
}

void add_model_options(CLI::App* cmd, ModelArgs& m) {
  cmd->add_option("--model-dir", m.model_dir, "Trained model directory")->required();
  cmd->add_option("--vocoder", m.vocoder, "griffin_lim or neural")
      ->check(CLI::IsMember({"griffin_lim", "neural"}));
  cmd->add_option("--vocoder-checkpoint", m.vocoder_checkpoint,
                  "Generator checkpoint (default <model-dir>/vocoder.ckpt)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emotion-aware text-to-speech toolkit"};
  app.require_subcommand(1);

  PreprocessArgs pre;
  auto* c_pre = app.add_subcommand("preprocess", "Align a corpus and write a feature manifest");
  c_pre->add_option("--audio-dir", pre.audio_dir)->required();
  c_pre->add_option("--textgrid-dir", pre.textgrid_dir)->required();
  c_pre->add_option("--metadata", pre.metadata, "Pipe-delimited metadata file")->required();
  c_pre->add_option("--out", pre.out, "Manifest directory")->required();
  c_pre->add_flag("--lenient", pre.lenient, "Skip failing records instead of aborting");
  c_pre->add_option("--threads", pre.threads);

  ClassifierArgs cls;
  auto* c_cls = app.add_subcommand("train-classifier", "Train the text emotion classifier");
  c_cls->add_option("--data", cls.data, "TSV: text<TAB>emotion")->required();
  c_cls->add_option("--out", cls.out, "Checkpoint path")->required();
  c_cls->add_option("--epochs", cls.cfg.epochs);
  c_cls->add_option("--batch-size", cls.cfg.batch_size);
  c_cls->add_option("--lr", cls.cfg.learning_rate);
  c_cls->add_option("--layers", cls.cfg.model.layers);
  c_cls->add_option("--heads", cls.cfg.model.heads);
  c_cls->add_option("--hidden", cls.cfg.model.hidden);
  c_cls->add_option("--feed-forward", cls.cfg.model.feed_forward);
  c_cls->add_option("--seed", cls.cfg.seed);

  AcousticArgs ac;
  auto* c_ac = app.add_subcommand("train-acoustic", "Train the acoustic model");
  c_ac->add_option("--manifest", ac.manifest, "Directory written by preprocess")->required();
  c_ac->add_option("--out", ac.out, "Model directory")->required();
  c_ac->add_option("--config", ac.config, "AcousticConfig JSON");
  c_ac->add_option("--tiny", ac.tiny, "Use the tiny configuration with this hidden size");
  c_ac->add_option("--steps", ac.cfg.steps);
  c_ac->add_option("--batch-size", ac.cfg.optimizer.batch_size);
  c_ac->add_option("--warmup", ac.cfg.optimizer.warmup);
  c_ac->add_option("--base-scale", ac.cfg.optimizer.base_scale);
  c_ac->add_option("--checkpoint-every", ac.cfg.checkpoint_every);
  c_ac->add_option("--log-every", ac.log_every);
  c_ac->add_option("--gender", ac.genders, "Speaker gender as name=gender (repeatable)");
  c_ac->add_option("--seed", ac.cfg.seed);

  SynthArgs sy;
  auto* c_sy = app.add_subcommand("synth", "Synthesize one utterance to a WAV file");
  add_model_options(c_sy, sy.model);
  c_sy->add_option("--text", sy.text)->required();
  c_sy->add_option("--speaker", sy.speaker, "Speaker name (default: first in the table)");
  c_sy->add_option("--emotion", sy.emotion, "auto or one of: " + emotion_names())
      ->check(kEmotionValidator);
  c_sy->add_option("--out", sy.out, "Output WAV path")->required();
  c_sy->add_option("--seed", sy.seed);
  c_sy->add_option("--duration-scale", sy.duration_scale)->check(CLI::PositiveNumber);

  ClassifyArgs cl;
  auto* c_cl = app.add_subcommand("classify", "Print emotion probabilities for a text");
  c_cl->add_option("--model-dir", cl.model_dir);
  c_cl->add_option("--classifier", cl.classifier, "Classifier checkpoint");
  c_cl->add_option("--text", cl.text)->required();

  BenchArgs be;
  auto* c_be = app.add_subcommand("bench", "Time synthesis and write RTF reports");
  add_model_options(c_be, be.model);
  c_be->add_option("--speaker", be.speakers, "Speakers (default: all)");
  c_be->add_option("--emotion", be.emotions, "Manual emotions to time")
      ->check(CLI::IsMember(std::vector<std::string>(kEmotionNames.begin(), kEmotionNames.end())));
  c_be->add_option("--text", be.texts, "Benchmark sentences (repeatable)");
  c_be->add_option("--repeats", be.repeats)->check(CLI::PositiveNumber);
  c_be->add_option("--out-dir", be.out_dir);
  c_be->add_option("--reference", be.reference,
                   "Published results JSON to list next to the measured RTF");

  ServeArgs sv;
  auto* c_sv = app.add_subcommand("serve", "Run the HTTP synthesis service");
  c_sv->add_option("--config", sv.config, "key = value service config file");
  c_sv->add_option("--model-dir", sv.model_dir);
  c_sv->add_option("--host", sv.host);
  c_sv->add_option("--port", sv.port);
  c_sv->add_option("--workers", sv.workers);
  c_sv->add_option("--vocoder", sv.vocoder)->check(CLI::IsMember({"griffin_lim", "neural"}));

  ImportVocoderArgs iv;
  auto* c_iv = app.add_subcommand("import-vocoder",
                                  "Convert exported HiFi-GAN .npy tensors to a checkpoint");
  c_iv->add_option("--npy-dir", iv.npy_dir, "Directory written by export_hifigan_npy.py")
      ->required();
  c_iv->add_option("--out", iv.out, "Output checkpoint (e.g. <model-dir>/vocoder.ckpt)")
      ->required();
  c_iv->add_option("--config", iv.config, "GeneratorConfig JSON (default: <npy-dir>/generator.json, else V1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (c_pre->parsed()) return run_preprocess(pre);
    if (c_cls->parsed()) return run_train_classifier(cls);
    if (c_ac->parsed()) return run_train_acoustic(ac);
    if (c_sy->parsed()) return run_synth(sy);
    if (c_cl->parsed()) {
      if (cl.model_dir.empty() && cl.classifier.empty()) {
        std::cerr << "classify: one of --model-dir or --classifier is required\n";
        return kUsageError;
      }
      return run_classify(cl);
    }
    if (c_be->parsed()) return run_bench(be);
    if (c_sv->parsed()) return run_serve(sv);
    if (c_iv->parsed()) return run_import_vocoder(iv);
  } catch (const emotts::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}
