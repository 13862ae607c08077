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

#include "emotts/corpus/dataset.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <mutex>
#include <optional>
#include <thread>

#include <json.hpp>

#include "emotts/dsp/resample.h"
#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"
#include "emotts/text/phonemes.h"
#include "emotts/vocoder/wav.h"

namespace emotts::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kManifestVersion = 1;

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

const IntervalTier& phone_tier(const std::vector<IntervalTier>& tiers, const DatasetConfig& cfg) {
  if (const auto* t = find_tier(tiers, cfg.phone_tier)) return *t;
  if (const auto* t = find_tier(tiers, "phone")) return *t;
  throw AlignmentMismatch("TextGrid has no '" + cfg.phone_tier + "' tier");
}

std::optional<fs::path> locate(const fs::path& dir, const MetadataRecord& r,
                               const std::vector<std::string>& extensions) {
  for (const auto& ext : extensions) {
    for (const fs::path& p : {dir / (r.file_id + ext), dir / r.speaker_id / (r.file_id + ext)}) {
      if (fs::is_regular_file(p)) return p;
    }
  }
  return std::nullopt;
}

[[noreturn]] void rethrow_issue(const DatasetIssue& first, const std::string& message) {
  if (first.code == "missing_asset") throw MissingAsset(message);
  if (first.code == "alignment_mismatch") throw AlignmentMismatch(message);
  throw DataError(message);
}

}  // namespace

int AlignedUtterance::total_frames() const {
  int sum = 0;
  for (int d : durations_frames) sum += d;
  return sum;
}

void AlignedUtterance::check_invariants() const {
  const int sum = total_frames();
  if (durations_frames.size() != record.phonemes.size()) {
    throw AlignmentMismatch(record.file_id + ": " + std::to_string(durations_frames.size()) +
                            " durations for " + std::to_string(record.phonemes.size()) +
                            " phonemes");
  }
  if (std::any_of(durations_frames.begin(), durations_frames.end(), [](int d) { return d < 0; })) {
    throw AlignmentMismatch(record.file_id + ": negative duration");
  }
  if (sum != mel.num_frames() || sum != pitch.size() || sum != energy.size()) {
    throw AlignmentMismatch(record.file_id + ": frame counts disagree (durations " +
                            std::to_string(sum) + ", mel " + std::to_string(mel.num_frames()) +
                            ", pitch " + std::to_string(pitch.size()) + ", energy " +
                            std::to_string(energy.size()) + ")");
  }
  if (!mel.values.allFinite()) throw AlignmentMismatch(record.file_id + ": non-finite mel");
}

AlignedUtterance align_utterance(const MetadataRecord& record,
                                 const std::vector<IntervalTier>& tiers,
                                 const Eigen::VectorXd& waveform, const DatasetConfig& cfg,
                                 LintEntry* lint) {
  const auto& audio = cfg.audio;
  const auto& intervals = phone_tier(tiers, cfg).intervals;
  const std::string& id = record.file_id;

  std::size_t first = intervals.size();
  std::size_t last = 0;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    if (!text::is_silence_label(intervals[k].label)) {
      first = std::min(first, k);
      last = k;
    }
  }
  if (first == intervals.size()) throw AlignmentMismatch(id + ": phones tier has no phonemes");

  const double start = intervals[first].xmin;
  const double audio_seconds = static_cast<double>(waveform.size()) / audio.sample_rate;
  if (lint != nullptr) {
    lint->file_id = id;
    lint->leading_silence = start;
    lint->trailing_silence = std::max(0.0, audio_seconds - intervals[last].xmax);
  }

  // Boundaries relative to the crop start, one per record phoneme end.
  std::vector<double> boundaries = {0.0};
  std::size_t j = 0;
  for (std::size_t k = first; k <= last; ++k) {
    const auto& iv = intervals[k];
    const double end = iv.xmax - start;
    if (text::is_silence_label(iv.label)) {
      if (j < record.phonemes.size() && record.phonemes[j] == "SIL") {
        boundaries.push_back(end);
        ++j;
      } else {
        boundaries.back() = end;
      }
      continue;
    }
    if (j >= record.phonemes.size()) {
      throw AlignmentMismatch(id + ": TextGrid has more phonemes than the record");
    }
    if (upper(iv.label) != record.phonemes[j]) {
      throw AlignmentMismatch(id + ": phoneme " + std::to_string(j) + " is '" +
                              record.phonemes[j] + "' in the record but '" + iv.label +
                              "' in the TextGrid");
    }
    boundaries.push_back(end);
    ++j;
  }
  if (j != record.phonemes.size()) {
    throw AlignmentMismatch(id + ": record has " + std::to_string(record.phonemes.size()) +
                            " phonemes, TextGrid aligns " + std::to_string(j));
  }

  AlignedUtterance utt;
  utt.record = record;
  utt.durations_frames =
      boundaries_to_frame_durations(boundaries, audio.sample_rate, audio.hop_length);
  const int target = utt.total_frames();

  const auto begin = static_cast<Eigen::Index>(std::lround(start * audio.sample_rate));
  const auto end = std::min<Eigen::Index>(
      waveform.size(),
      static_cast<Eigen::Index>(std::lround(intervals[last].xmax * audio.sample_rate)));
  if (end <= begin) throw AlignmentMismatch(id + ": aligned span lies outside the audio");
  const Eigen::VectorXd cropped = waveform.segment(begin, end - begin);

  utt.mel = extract_mel(cropped, audio);
  utt.pitch = extract_pitch(cropped, audio);
  utt.energy = extract_energy(cropped, audio);

  const auto frames = static_cast<int>(utt.mel.num_frames());
  if (std::abs(frames - target) > cfg.max_frame_slack) {
    throw AlignmentMismatch(id + ": audio yields " + std::to_string(frames) +
                            " frames but durations sum to " + std::to_string(target) +
                            " (slack limit " + std::to_string(cfg.max_frame_slack) + ")");
  }
  auto fit_rows = [target](Eigen::MatrixXd m) {
    const Eigen::Index have = m.rows();
    Eigen::MatrixXd out(target, m.cols());
    const Eigen::Index keep = std::min<Eigen::Index>(have, target);
    out.topRows(keep) = m.topRows(keep);
    for (Eigen::Index r = keep; r < target; ++r) out.row(r) = m.row(have - 1);
    return out;
  };
  utt.mel.values = fit_rows(std::move(utt.mel.values));
  utt.pitch = fit_rows(utt.pitch);
  utt.energy = fit_rows(utt.energy);
  utt.check_invariants();
  return utt;
}

DatasetResult build_dataset(const fs::path& audio_dir, const fs::path& textgrid_dir,
                            const fs::path& metadata_file, const DatasetConfig& cfg) {
  for (const auto& dir : {audio_dir, textgrid_dir}) {
    if (!fs::is_directory(dir)) throw MissingAsset("directory not found: " + dir.string());
  }
  const auto records = load_metadata(metadata_file);

  std::vector<std::optional<AlignedUtterance>> slots(records.size());
  std::vector<std::optional<DatasetIssue>> issues(records.size());
  std::vector<std::optional<LintEntry>> lints(records.size());

  auto process = [&](std::size_t i) {
    const auto& r = records[i];
    try {
      const auto wav = locate(audio_dir, r, {".wav", ".WAV"});
      const auto grid = locate(textgrid_dir, r, {".TextGrid", ".textgrid"});
      if (!wav || !grid) {
        std::string missing = !wav ? "audio" : "";
        if (!grid) missing += missing.empty() ? "TextGrid" : " and TextGrid";
        throw MissingAsset(r.file_id + ": no " + missing + " file");
      }
      Waveform w = vocoder::read_wav(*wav);
      if (w.sample_rate != cfg.audio.sample_rate) {
        w.samples = dsp::resample(w.samples, w.sample_rate, cfg.audio.sample_rate);
        w.sample_rate = cfg.audio.sample_rate;
      }
      const auto tiers = parse_textgrid(io::read_text(*grid));
      LintEntry lint;
      slots[i] = align_utterance(r, tiers, w.samples, cfg, &lint);
      if (lint.leading_silence > cfg.lint_silence_seconds ||
          lint.trailing_silence > cfg.lint_silence_seconds) {
        lints[i] = lint;
      }
    } catch (const Error& e) {
      issues[i] = DatasetIssue{r.file_id, e.code(), e.what()};
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(
      cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : hw,
      std::max<std::size_t>(records.size(), 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < records.size(); i = next++) process(i);
    });
  }
  for (auto& t : pool) t.join();

  DatasetResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (slots[i]) result.utterances.push_back(std::move(*slots[i]));
    if (issues[i]) result.issues.push_back(std::move(*issues[i]));
    if (lints[i]) result.lint.push_back(std::move(*lints[i]));
  }
  if (cfg.strict && !result.issues.empty()) {
    std::string message = std::to_string(result.issues.size()) + " record(s) failed: ";
    for (std::size_t i = 0; i < result.issues.size(); ++i) {
      if (i > 0) message += "; ";
      message += result.issues[i].message;
    }
    rethrow_issue(result.issues.front(), message);
  }
  return result;
}

void write_manifest(const fs::path& dir, const DatasetResult& data,
                    const dsp::AudioConfig& audio) {
  fs::create_directories(dir);
  json index = {{"format", "emotts-manifest"}, {"version", kManifestVersion}, {"audio", audio}};
  json entries = json::array();
  for (std::size_t i = 0; i < data.utterances.size(); ++i) {
    const auto& u = data.utterances[i];
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu.feat", i);
    io::Checkpoint ckpt;
    ckpt.kind = "utterance";
    ckpt.config = {{"record", serialize_metadata(u.record)},
                   {"durations", u.durations_frames},
                   {"sample_rate", u.mel.sample_rate},
                   {"hop_length", u.mel.hop_length}};
    ckpt.tensors = {{"mel", u.mel.values}, {"pitch", u.pitch}, {"energy", u.energy}};
    io::save_checkpoint(dir / name, ckpt);
    entries.push_back({{"file", name},
                       {"file_id", u.record.file_id},
                       {"speaker", u.record.speaker_id},
                       {"emotion", std::string(u.record.emotion.name())},
                       {"phonemes", u.record.phonemes.size()},
                       {"frames", u.total_frames()}});
  }
  index["utterances"] = entries;
  json issues = json::array();
  for (const auto& i : data.issues) {
    issues.push_back({{"file_id", i.file_id}, {"code", i.code}, {"message", i.message}});
  }
  index["issues"] = issues;
  json lint = json::array();
  for (const auto& l : data.lint) {
    lint.push_back({{"file_id", l.file_id},
                    {"leading_silence", l.leading_silence},
                    {"trailing_silence", l.trailing_silence}});
  }
  index["lint"] = lint;
  io::write_text_atomic(dir / "index.json", index.dump(2) + "\n");
}

Manifest read_manifest(const fs::path& dir) {
  const fs::path index_path = dir / "index.json";
  if (!fs::is_regular_file(index_path)) {
    throw MissingAsset("manifest index not found: " + index_path.string());
  }
  Manifest m;
  json index;
  try {
    index = json::parse(io::read_text(index_path));
    if (index.value("format", "") != "emotts-manifest") throw DataError("not a manifest index");
    if (index.value("version", 0) != kManifestVersion) {
      throw DataError("unsupported manifest version");
    }
    m.audio = index.at("audio").get<dsp::AudioConfig>();
  } catch (const json::exception& e) {
    throw DataError(index_path.string() + ": " + e.what());
  }
  for (const auto& entry : index.at("utterances")) {
    const auto ckpt = io::load_checkpoint(dir / entry.at("file").get<std::string>());
    AlignedUtterance u;
    u.record = parse_metadata_line(ckpt.config.at("record").get<std::string>());
    u.durations_frames = ckpt.config.at("durations").get<std::vector<int>>();
    u.mel.values = ckpt.tensor("mel");
    u.mel.sample_rate = ckpt.config.value("sample_rate", m.audio.sample_rate);
    u.mel.hop_length = ckpt.config.value("hop_length", m.audio.hop_length);
    u.pitch = ckpt.tensor("pitch");
    u.energy = ckpt.tensor("energy");
    u.check_invariants();
    m.utterances.push_back(std::move(u));
  }
  return m;
}

}  // namespace emotts::corpus
