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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "emotts/acoustic/model.h"
#include "emotts/acoustic/speakers.h"
#include "emotts/corpus/dataset.h"
#include "emotts/training/losses.h"
#include "emotts/training/schedule.h"

namespace emotts::training {

// Mean/std of the phoneme-level pitch (unvoiced frames interpolated) and
// energy over the corpus, with min/max of the z-scored values.
acoustic::VarianceStats compute_variance_stats(const std::vector<corpus::AlignedUtterance>& data);

// Converts one aligned utterance to model inputs and training targets.
// Throws UnknownSpeaker if the speaker is missing from the table.
UtteranceTargets prepare_targets(const corpus::AlignedUtterance& utt,
                                 const acoustic::AcousticModel& model,
                                 const acoustic::SpeakerTable& speakers);

struct StepLog {
  long step = 0;
  double lr = 0.0;
  LossBreakdown loss;
  double grad_norm = 0.0;  // before clipping
};

struct AcousticTrainConfig {
  OptimizerConfig optimizer;
  long steps = 1000;
  // Checkpoint cadence in steps (0: only at the end). Needs output_dir.
  long checkpoint_every = 0;
  // When set: train_log.jsonl, acoustic.ckpt (+ acoustic_step_N.ckpt),
  // speakers.json and any non-finite-loss dump are written here.
  std::filesystem::path output_dir;
  // Recompute pitch/energy normalisation from the training data.
  bool fit_stats = true;
  std::uint64_t seed = 0;
};

struct AcousticTrainResult {
  std::vector<StepLog> history;
  acoustic::SpeakerTable speakers;
};

// Adam with the configured betas/eps/weight decay, global-norm clipping and
// the lr_at schedule; teacher-forced forward passes in training mode. On a
// non-finite loss or gradient a JSON dump is written and NonFiniteLoss thrown.
// Throws DataError on an empty dataset and ConfigError if the corpus has more
// speakers than the model's table.
AcousticTrainResult train_acoustic(const std::vector<corpus::AlignedUtterance>& data,
                                   acoustic::AcousticModel& model,
                                   const AcousticTrainConfig& config,
                                   const std::function<void(const StepLog&)>& on_step = {});

}  // namespace emotts::training
