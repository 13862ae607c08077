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

#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "emotts/acoustic/model.h"
#include "emotts/errors.h"
#include "emotts/nn/var.h"

namespace emotts::training {

// Mean absolute difference over the first `valid_rows` rows (all rows when
// negative). Throws ShapeError on mismatched shapes.
template <typename A, typename B>
double l1_loss(const Eigen::MatrixBase<A>& pred, const Eigen::MatrixBase<B>& truth,
               Eigen::Index valid_rows = -1) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
    throw ShapeError("l1_loss: prediction and target shapes differ");
  }
  const Eigen::Index rows = valid_rows < 0 ? pred.rows() : std::min(valid_rows, pred.rows());
  if (rows == 0 || pred.cols() == 0) return 0.0;
  return (pred.topRows(rows) - truth.topRows(rows)).cwiseAbs().sum() /
         static_cast<double>(rows * pred.cols());
}

// Mean squared difference, masked like l1_loss.
template <typename A, typename B>
double mse_loss(const Eigen::MatrixBase<A>& pred, const Eigen::MatrixBase<B>& truth,
                Eigen::Index valid_rows = -1) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
    throw ShapeError("mse_loss: prediction and target shapes differ");
  }
  const Eigen::Index rows = valid_rows < 0 ? pred.rows() : std::min(valid_rows, pred.rows());
  if (rows == 0 || pred.cols() == 0) return 0.0;
  return (pred.topRows(rows) - truth.topRows(rows)).squaredNorm() /
         static_cast<double>(rows * pred.cols());
}

struct LossBreakdown {
  double mel = 0.0;
  double postnet_mel = 0.0;
  double pitch = 0.0;
  double energy = 0.0;
  double duration = 0.0;
  double total = 0.0;

  // Fills `total` with the component sum.
  static LossBreakdown from_components(double mel, double postnet_mel, double pitch,
                                       double energy, double duration);
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LossBreakdown, mel, postnet_mel, pitch, energy, duration,
                                   total)

// Everything the loss needs for one utterance.
struct UtteranceTargets {
  acoustic::AcousticInput input;
  acoustic::VarianceTargets variance;  // durations in frames, z-scored pitch/energy
  Eigen::MatrixXd mel;                  // frames x n_mels
};

struct AcousticLoss {
  nn::Var total;  // differentiable scalar
  LossBreakdown breakdown;
};

// Mel and postnet mel through L1, pitch, energy and log(1 + frames) duration
// targets through MSE. Means run over the valid elements of the whole batch,
// so a batch equals one long utterance with the same elements.
AcousticLoss total_loss(const std::vector<acoustic::AcousticOutput>& outputs,
                        const std::vector<UtteranceTargets>& targets);
AcousticLoss total_loss(const acoustic::AcousticOutput& output, const UtteranceTargets& target);

}  // namespace emotts::training
