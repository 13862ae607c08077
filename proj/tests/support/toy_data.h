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

#include "emotts/corpus/dataset.h"
#include "emotts/corpus/toy.h"
#include "support/test_util.h"

namespace emotts::testing {

// Writes an n-utterance toy corpus into `dir` and aligns it.
inline std::vector<corpus::AlignedUtterance> toy_dataset(const TempDir& dir, int utterances,
                                                         std::uint64_t seed = 0) {
  corpus::ToyCorpusOptions opts;
  opts.utterances = utterances;
  opts.seed = seed;
  corpus::write_toy_corpus(dir.path(), opts);
  return corpus::build_dataset(dir / "wavs", dir / "textgrids", dir / "metadata.txt", {})
      .utterances;
}

}  // namespace emotts::testing
