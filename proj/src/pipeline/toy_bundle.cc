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

#include "emotts/pipeline/toy_bundle.h"

#include "emotts/corpus/dataset.h"
#include "emotts/corpus/toy.h"
#include "emotts/emoclass/train.h"
#include "emotts/io/checkpoint.h"
#include "emotts/pipeline/bundle.h"
#include "emotts/training/trainer.h"

namespace emotts::pipeline {

const std::map<std::string, std::string>& toy_speaker_genders() {
  static const std::map<std::string, std::string> genders = {
      {"bea", "female"}, {"jenie", "female"}, {"josh", "male"}, {"sam", "male"}};
  return genders;
}

void build_toy_bundle(const std::filesystem::path& dir, const ToyBundleOptions& options) {
  const auto corpus_dir = dir / "corpus";
  corpus::ToyCorpusOptions corpus_opts;
  corpus_opts.utterances = options.utterances;
  corpus_opts.seed = options.seed;
  corpus::write_toy_corpus(corpus_dir, corpus_opts);
  const corpus::DatasetConfig data_cfg;
  const auto data = corpus::build_dataset(corpus_dir / "wavs", corpus_dir / "textgrids",
                                          corpus_dir / "metadata.txt", data_cfg);

  auto model_cfg = acoustic::AcousticConfig::tiny(options.acoustic_hidden, data_cfg.audio.n_mels);
  model_cfg.seed = options.seed;
  acoustic::AcousticModel model(model_cfg);
  if (options.acoustic_steps > 0) {
    training::AcousticTrainConfig train_cfg;
    train_cfg.steps = options.acoustic_steps;
    train_cfg.optimizer.warmup = 50;
    train_cfg.output_dir = dir;
    train_cfg.seed = options.seed;
    training::train_acoustic(data.utterances, model, train_cfg);
  } else {
    model.set_stats(training::compute_variance_stats(data.utterances));
    std::vector<std::string> names;
    for (const auto& u : data.utterances) names.push_back(u.record.speaker_id);
    acoustic::SpeakerTable::from_names(names).save(dir / "speakers.json");
    acoustic::save_acoustic(dir / "acoustic.ckpt", model);
  }

  if (options.classifier_epochs > 0) {
    emoclass::ClassifierTrainConfig cls_cfg;
    cls_cfg.epochs = options.classifier_epochs;
    cls_cfg.model.hidden = 32;
    cls_cfg.model.feed_forward = 64;
    cls_cfg.model.layers = 1;
    cls_cfg.seed = options.seed;
    const auto result =
        emoclass::train_classifier(emoclass::load_labeled_tsv(corpus_dir / "classifier.tsv"), cls_cfg);
    emoclass::save_classifier(dir / "classifier.ckpt", *result.model, result.vocab);
  }

  write_emotions_json(dir / "emotions.json");
  write_genders_json(dir / "speaker_genders.json", toy_speaker_genders());
  io::write_text_atomic(dir / "audio.json", nlohmann::json(data_cfg.audio).dump(2) + "\n");
}

}  // namespace emotts::pipeline
