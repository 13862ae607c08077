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

#include "emotts/training/trainer.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "emotts/corpus/features.h"
#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"
#include "emotts/nn/optim.h"
#include "emotts/text/phonemes.h"

namespace emotts::training {

namespace {

struct PhonemeFeatures {
  Eigen::VectorXd pitch;
  Eigen::VectorXd energy;
};

PhonemeFeatures phoneme_features(const corpus::AlignedUtterance& utt) {
  return {corpus::phoneme_averages(corpus::interpolate_unvoiced(utt.pitch), utt.durations_frames),
          corpus::phoneme_averages(utt.energy, utt.durations_frames)};
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 1.0};
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(v.size()));
  return {mean, sd > 1e-8 ? sd : 1.0};
}

nlohmann::ordered_json log_line(const StepLog& s) {
  nlohmann::ordered_json j;
  j["step"] = s.step;
  j["lr"] = s.lr;
  j["mel"] = s.loss.mel;
  j["postnet_mel"] = s.loss.postnet_mel;
  j["pitch"] = s.loss.pitch;
  j["energy"] = s.loss.energy;
  j["duration"] = s.loss.duration;
  j["total"] = s.loss.total;
  return j;
}

[[noreturn]] void abort_non_finite(const AcousticTrainConfig& config, long step, double lr,
                                   const LossBreakdown& loss, const std::vector<std::string>& ids,
                                   const nn::ParameterStore& store) {
  nlohmann::ordered_json dump;
  dump["step"] = step;
  dump["lr"] = lr;
  dump["loss"] = nlohmann::json(loss);
  dump["batch"] = ids;
  std::vector<std::string> bad_values, bad_grads;
  for (const auto& [name, var] : store.entries()) {
    if (!var.value().allFinite()) bad_values.push_back(name);
    if (var.has_grad() && !var.grad().allFinite()) bad_grads.push_back(name);
  }
  dump["non_finite_parameters"] = bad_values;
  dump["non_finite_gradients"] = bad_grads;
  std::string where;
  if (!config.output_dir.empty()) {
    const auto path = config.output_dir / ("nonfinite_step_" + std::to_string(step) + ".json");
    io::write_text_atomic(path, dump.dump(2) + "\n");
    where = "; diagnostics written to " + path.string();
  }
  throw NonFiniteLoss("non-finite loss or gradient at step " + std::to_string(step) + where);
}

}  // namespace

acoustic::VarianceStats compute_variance_stats(const std::vector<corpus::AlignedUtterance>& data) {
  std::vector<double> pitch, energy;
  for (const auto& utt : data) {
    const auto f = phoneme_features(utt);
    for (Eigen::Index i = 0; i < f.pitch.size(); ++i) {
      // Zero-length spans carry no measurement.
      if (utt.durations_frames[static_cast<std::size_t>(i)] == 0) continue;
      pitch.push_back(f.pitch(i));
      energy.push_back(f.energy(i));
    }
  }
  acoustic::VarianceStats s;
  std::tie(s.pitch_mean, s.pitch_std) = mean_std(pitch);
  std::tie(s.energy_mean, s.energy_std) = mean_std(energy);
  if (!pitch.empty()) {
    const auto [pmin, pmax] = std::minmax_element(pitch.begin(), pitch.end());
    const auto [emin, emax] = std::minmax_element(energy.begin(), energy.end());
    s.pitch_min = (*pmin - s.pitch_mean) / s.pitch_std;
    s.pitch_max = (*pmax - s.pitch_mean) / s.pitch_std;
    s.energy_min = (*emin - s.energy_mean) / s.energy_std;
    s.energy_max = (*emax - s.energy_mean) / s.energy_std;
  }
  return s;
}

UtteranceTargets prepare_targets(const corpus::AlignedUtterance& utt,
                                 const acoustic::AcousticModel& model,
                                 const acoustic::SpeakerTable& speakers) {
  const auto& cfg = model.config();
  if (utt.mel.num_mels() != cfg.n_mels) {
    throw ShapeError(utt.record.file_id + ": mel has " + std::to_string(utt.mel.num_mels()) +
                     " bins, model expects " + std::to_string(cfg.n_mels));
  }
  if (utt.total_frames() != utt.mel.num_frames()) {
    throw AlignmentMismatch(utt.record.file_id + ": durations do not cover the mel frames");
  }
  UtteranceTargets t;
  t.input.phoneme_ids = text::PhonemeVocabulary::instance().encode(utt.record.phonemes);
  t.input.speaker = cfg.multi_speaker ? speakers.id(utt.record.speaker_id) : 0;
  t.input.emotion = utt.record.emotion.id;
  const auto f = phoneme_features(utt);
  t.variance.durations = utt.durations_frames;
  t.variance.pitch = f.pitch.unaryExpr([&](double v) { return model.normalize_pitch(v); });
  t.variance.energy = f.energy.unaryExpr([&](double v) { return model.normalize_energy(v); });
  t.mel = utt.mel.values;
  return t;
}

AcousticTrainResult train_acoustic(const std::vector<corpus::AlignedUtterance>& data,
                                   acoustic::AcousticModel& model,
                                   const AcousticTrainConfig& config,
                                   const std::function<void(const StepLog&)>& on_step) {
  if (data.empty()) throw DataError("acoustic training needs at least one utterance");
  config.optimizer.validate();
  if (config.steps < 0) throw ConfigError("steps must be non-negative");

  AcousticTrainResult result;
  std::vector<std::string> names;
  for (const auto& u : data) names.push_back(u.record.speaker_id);
  result.speakers = acoustic::SpeakerTable::from_names(names);
  if (model.config().multi_speaker && result.speakers.size() > model.config().n_speakers) {
    throw ConfigError("corpus has " + std::to_string(result.speakers.size()) +
                      " speakers but the model table holds " +
                      std::to_string(model.config().n_speakers));
  }
  if (config.fit_stats) model.set_stats(compute_variance_stats(data));

  std::vector<UtteranceTargets> targets;
  targets.reserve(data.size());
  for (const auto& u : data) targets.push_back(prepare_targets(u, model, result.speakers));

  std::ofstream log;
  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    result.speakers.save(config.output_dir / "speakers.json");
    log.open(config.output_dir / "train_log.jsonl", std::ios::trunc);
    if (!log) throw IoError("cannot write training log in " + config.output_dir.string());
  }

  const auto& opt = config.optimizer;
  nn::Adam adam(model.parameters(), nn::AdamConfig{opt.beta1, opt.beta2, opt.eps, opt.weight_decay});
  std::mt19937_64 rng(config.seed);
  nn::ForwardContext ctx{true, &rng};

  // Epoch-wise shuffled order; batches wrap around epoch boundaries.
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t cursor = order.size();
  auto next_index = [&] {
    if (cursor == order.size()) {
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }
    return order[cursor++];
  };

  const int batch = std::min<int>(opt.batch_size, static_cast<int>(data.size()));
  for (long step = 1; step <= config.steps; ++step) {
    const double lr = lr_at(step, opt, model.config().encoder_hidden);
    model.parameters().zero_grad();
    LossBreakdown mean_loss;
    std::vector<std::string> ids;
    for (int micro = 0; micro < opt.accumulation; ++micro) {
      std::vector<acoustic::AcousticOutput> outputs;
      std::vector<UtteranceTargets> batch_targets;
      for (int b = 0; b < batch; ++b) {
        const std::size_t i = next_index();
        ids.push_back(data[i].record.file_id);
        outputs.push_back(model.forward(targets[i].input, &targets[i].variance, ctx));
        batch_targets.push_back(targets[i]);
      }
      const AcousticLoss loss = total_loss(outputs, batch_targets);
      if (!std::isfinite(loss.breakdown.total)) {
        abort_non_finite(config, step, lr, loss.breakdown, ids, model.parameters());
      }
      (loss.total * (1.0 / opt.accumulation)).backward();
      const double w = 1.0 / opt.accumulation;
      mean_loss.mel += w * loss.breakdown.mel;
      mean_loss.postnet_mel += w * loss.breakdown.postnet_mel;
      mean_loss.pitch += w * loss.breakdown.pitch;
      mean_loss.energy += w * loss.breakdown.energy;
      mean_loss.duration += w * loss.breakdown.duration;
    }
    mean_loss = LossBreakdown::from_components(mean_loss.mel, mean_loss.postnet_mel,
                                               mean_loss.pitch, mean_loss.energy,
                                               mean_loss.duration);
    const double norm = nn::clip_grad_norm(model.parameters(), opt.grad_clip);
    if (!std::isfinite(norm)) abort_non_finite(config, step, lr, mean_loss, ids, model.parameters());
    adam.step(lr);

    StepLog entry{step, lr, mean_loss, norm};
    result.history.push_back(entry);
    if (log.is_open()) log << log_line(entry).dump() << '\n' << std::flush;
    if (on_step) on_step(entry);
    if (!config.output_dir.empty() && config.checkpoint_every > 0 &&
        step % config.checkpoint_every == 0) {
      acoustic::save_acoustic(config.output_dir / ("acoustic_step_" + std::to_string(step) + ".ckpt"),
                              model);
    }
  }
  if (!config.output_dir.empty()) acoustic::save_acoustic(config.output_dir / "acoustic.ckpt", model);
  return result;
}

}  // namespace emotts::training
