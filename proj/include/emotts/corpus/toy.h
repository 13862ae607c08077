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
#include <string>
#include <vector>

#include "emotts/corpus/metadata.h"
#include "emotts/corpus/textgrid.h"
#include "emotts/waveform.h"

namespace emotts::corpus {

// Synthetic, fully self-consistent corpus used by the tests, the acceptance
// suite and the quick-start guide: harmonic "vowels", noise "consonants",
// exact TextGrids, and a matching metadata file and lexicon.
struct ToyCorpusOptions {
  int utterances = 8;
  std::vector<std::string> speakers = {"bea", "jenie", "josh", "sam"};
  int sample_rate = 16000;
  double leading_silence = 0.1;
  double trailing_silence = 0.1;
  std::uint64_t seed = 0;
};

struct ToyUtterance {
  MetadataRecord record;
  IntervalTier phones;
  Waveform audio;
};

// The raw texts used by the toy generator, with their pronunciations.
const std::vector<std::pair<std::string, std::vector<std::string>>>& toy_lexicon();

std::vector<ToyUtterance> make_toy_corpus(const ToyCorpusOptions& options);

// Layout: <dir>/wavs/<id>.wav, <dir>/textgrids/<id>.TextGrid,
// <dir>/metadata.txt, <dir>/lexicon.txt, <dir>/classifier.tsv.
std::vector<ToyUtterance> write_toy_corpus(const std::filesystem::path& dir,
                                           const ToyCorpusOptions& options);

}  // namespace emotts::corpus
