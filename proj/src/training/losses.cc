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

#include "emotts/training/losses.h"

#include <cmath>

#include "emotts/nn/ops.h"

namespace emotts::training {

namespace {

// Sum of |pred - truth| (or squared) over every element; truth is constant.
nn::Var abs_sum(const nn::Var& pred, const Eigen::MatrixXd& truth) {
  return nn::sum(nn::abs(pred - nn::constant(truth)));
}

nn::Var square_sum(const nn::Var& pred, const Eigen::MatrixXd& truth) {
  return nn::sum(nn::square(pred - nn::constant(truth)));
}

void check_shape(const nn::Var& pred, const Eigen::MatrixXd& truth, const char* what) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
    throw ShapeError(std::string(what) + ": prediction is " + std::to_string(pred.rows()) + "x" +
                     std::to_string(pred.cols()) + ", target is " + std::to_string(truth.rows()) +
                     "x" + std::to_string(truth.cols()));
  }
}

}  // namespace

LossBreakdown LossBreakdown::from_components(double mel, double postnet_mel, double pitch,
                                             double energy, double duration) {
  return LossBreakdown{mel, postnet_mel, pitch, energy, duration,
                       mel + postnet_mel + pitch + energy + duration};
}

AcousticLoss total_loss(const std::vector<acoustic::AcousticOutput>& outputs,
                        const std::vector<UtteranceTargets>& targets) {
  if (outputs.size() != targets.size() || outputs.empty()) {
    throw ShapeError("total_loss needs one target per output and a non-empty batch");
  }
  std::vector<nn::Var> mel, post, pitch, energy, duration;
  double mel_count = 0.0;
  double phone_count = 0.0;
  for (std::size_t b = 0; b < outputs.size(); ++b) {
    const auto& out = outputs[b];
    const auto& t = targets[b];
    check_shape(out.mel_before, t.mel, "mel");
    check_shape(out.mel_after, t.mel, "postnet mel");
    const auto n = static_cast<Eigen::Index>(t.variance.durations.size());
    Eigen::MatrixXd log_d(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      log_d(i, 0) = std::log1p(static_cast<double>(t.variance.durations[static_cast<std::size_t>(i)]));
    }
    check_shape(out.variance.log_durations, log_d, "duration");
    check_shape(out.variance.pitch, Eigen::MatrixXd(t.variance.pitch), "pitch");
    check_shape(out.variance.energy, Eigen::MatrixXd(t.variance.energy), "energy");

    mel.push_back(abs_sum(out.mel_before, t.mel));
    post.push_back(abs_sum(out.mel_after, t.mel));
    pitch.push_back(square_sum(out.variance.pitch, t.variance.pitch));
    energy.push_back(square_sum(out.variance.energy, t.variance.energy));
    duration.push_back(square_sum(out.variance.log_durations, log_d));
    mel_count += static_cast<double>(t.mel.size());
    phone_count += static_cast<double>(n);
  }
  if (mel_count == 0.0 || phone_count == 0.0) throw ShapeError("total_loss over an empty batch");

  const nn::Var l_mel = nn::add_scalars(mel) * (1.0 / mel_count);
  const nn::Var l_post = nn::add_scalars(post) * (1.0 / mel_count);
  const nn::Var l_pitch = nn::add_scalars(pitch) * (1.0 / phone_count);
  const nn::Var l_energy = nn::add_scalars(energy) * (1.0 / phone_count);
  const nn::Var l_dur = nn::add_scalars(duration) * (1.0 / phone_count);

  AcousticLoss loss;
  loss.total = nn::add_scalars({l_mel, l_post, l_pitch, l_energy, l_dur});
  loss.breakdown = LossBreakdown::from_components(l_mel.scalar(), l_post.scalar(),
                                                  l_pitch.scalar(), l_energy.scalar(),
                                                  l_dur.scalar());
  return loss;
}

AcousticLoss total_loss(const acoustic::AcousticOutput& output, const UtteranceTargets& target) {
  return total_loss(std::vector<acoustic::AcousticOutput>{output},
                    std::vector<UtteranceTargets>{target});
}

}  // namespace emotts::training
