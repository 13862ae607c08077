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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "emotts/corpus/features.h"
#include "emotts/corpus/metadata.h"
#include "emotts/dsp/audio_config.h"

namespace emotts::corpus {

struct AlignedUtterance {
  MetadataRecord record;
  std::vector<int> durations_frames;  // one per record phoneme
  MelSpectrogram mel;
  Eigen::VectorXd pitch;   // Hz, 0 when unvoiced
  Eigen::VectorXd energy;  // >= 0

  int total_frames() const;
  // Throws AlignmentMismatch if the sum-consistency invariant is violated.
  void check_invariants() const;
};

struct DatasetConfig {
  dsp::AudioConfig audio;
  // Tier holding phone intervals; "phone" is accepted as a fallback.
  std::string phone_tier = "phones";
  // Largest |mel frames - sum(durations)| reconciled by trim or edge pad.
  int max_frame_slack = 2;
  // Leading/trailing silence above this is reported by the lint pass.
  double lint_silence_seconds = 0.3;
  // 0 picks the hardware concurrency.
  int threads = 0;
  // Throw after collecting all issues (true) or skip the offending records.
  bool strict = true;
};

struct DatasetIssue {
  std::string file_id;
  std::string code;  // error code of the underlying failure
  std::string message;
};

struct LintEntry {
  std::string file_id;
  double leading_silence = 0.0;
  double trailing_silence = 0.0;
};

struct DatasetResult {
  std::vector<AlignedUtterance> utterances;
  std::vector<DatasetIssue> issues;
  std::vector<LintEntry> lint;
};

// Aligns one record with its TextGrid phones tier and waveform (already at
// cfg.audio.sample_rate). Leading and trailing silences are cropped; inner
// silences map to a SIL symbol in the record or are merged into the
// preceding phoneme.
AlignedUtterance align_utterance(const MetadataRecord& record,
                                 const std::vector<IntervalTier>& tiers,
                                 const Eigen::VectorXd& waveform,
                                 const DatasetConfig& cfg,
                                 LintEntry* lint = nullptr);

// Looks up <id>.wav and <id>.TextGrid directly under the directories or under
// a per-speaker subdirectory; audio is resampled to cfg.audio.sample_rate.
// Per-record failures are collected; with cfg.strict the first failure kind
// is thrown after the pass, listing every failing file id.
DatasetResult build_dataset(const std::filesystem::path& audio_dir,
                            const std::filesystem::path& textgrid_dir,
                            const std::filesystem::path& metadata_file,
                            const DatasetConfig& cfg);

// Manifest directory: index.json plus one feature file per utterance.
void write_manifest(const std::filesystem::path& dir, const DatasetResult& data,
                    const dsp::AudioConfig& audio);

struct Manifest {
  dsp::AudioConfig audio;
  std::vector<AlignedUtterance> utterances;
};
Manifest read_manifest(const std::filesystem::path& dir);

}  // namespace emotts::corpus
