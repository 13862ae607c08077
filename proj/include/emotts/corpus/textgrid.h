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
#include <string_view>
#include <vector>

namespace emotts::corpus {

struct Interval {
  std::string label;
  double xmin = 0.0;
  double xmax = 0.0;

  bool operator==(const Interval&) const = default;
};

struct IntervalTier {
  std::string name;
  std::vector<Interval> intervals;
};

// Parses a Praat TextGrid in the long ("item [1]:") or short text form.
// Point tiers are skipped. Throws ParseError with a 1-based line number on
// malformed input or on intervals that are empty, unsorted, or overlapping.
std::vector<IntervalTier> parse_textgrid(std::string_view content);

// First tier whose name matches (case-insensitive); nullptr if absent.
const IntervalTier* find_tier(const std::vector<IntervalTier>& tiers,
                              std::string_view name);

// Long-form serialisation. Values are printed with 17 significant digits.
std::string emit_textgrid(const std::vector<IntervalTier>& tiers);

}  // namespace emotts::corpus
