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

#include <string>

#include <json.hpp>

#include "emotts/waveform.h"

namespace emotts::eval {

struct RmseResult {
  std::string speaker;
  std::string gender;
  std::string emotion;
  std::string sample_id;
  double rmse = 0.0;
  // True when the two inputs differed in length and the shorter one was
  // zero-padded at the end.
  bool padded = false;
};

// Root-mean-square difference between two waveforms after zero-padding the
// shorter one at the end. Two empty waveforms give 0. Throws RateMismatch
// if the sample rates differ.
RmseResult rmse_waveforms(const Waveform& a, const Waveform& b);

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RmseResult, speaker, gender, emotion, sample_id,
                                                rmse, padded)

}  // namespace emotts::eval
