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

#include <json.hpp>

#include "emotts/eval/metrics.h"
#include "emotts/eval/timing.h"

namespace emotts::eval {

// A rendered result table: a header, string cells, and free-text footnotes.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> footer;
};

// One row of a system-level speed comparison.
struct RtfRow {
  std::string system;
  std::string vocoder;
  double rtf = 0.0;
  std::string hardware;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RtfRow, system, vocoder, rtf, hardware)

struct TableOptions {
  // Emotions every speaker is expected to cover. A speaker without a result
  // for one of them gets no row for it and a footnote instead.
  std::vector<std::string> expected_emotions;
  // Prepend the Method column (manual vs classifier comparison tables).
  bool include_method = false;
};

// Speaker | Gender | Emotion | Sample ID | Time (s) | Words | Audio (s) |
// RTF | Repeats, optionally preceded by Method. Rows keep input order.
Table timing_table(const std::vector<TimingResult>& results, const TableOptions& options = {});
// Speaker | Gender | Emotion | Sample | RMSE | Padded
Table rmse_table(const std::vector<RmseResult>& results, const TableOptions& options = {});
// System | Vocoder | RTF | Hardware
Table rtf_table(const std::vector<RtfRow>& rows);

// RFC 4180: CRLF line endings; fields containing a comma, quote, CR or LF
// are quoted and inner quotes doubled. Footnotes are not part of the CSV.
std::string render_csv(const Table& table);
// Space-aligned columns with a rule under the header, then the footnotes.
std::string render_text(const Table& table);

struct ReportFiles {
  std::filesystem::path csv;
  std::filesystem::path text;
};

// Writes <dir>/<stem>.csv and <dir>/<stem>.txt atomically, creating `dir`.
ReportFiles emit_report(const Table& table, const std::filesystem::path& dir,
                        const std::string& stem);

// Machine description recorded alongside every benchmark.
struct HardwareInfo {
  std::string cpu_model;
  int logical_cores = 0;
  std::string os;
  std::string compiler;
  std::string build_type;

  std::string descriptor() const;  // one line, e.g. "AMD EPYC ... (8 threads), Linux 6.1, GCC 11.4"
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(HardwareInfo, cpu_model, logical_cores, os,
                                                compiler, build_type)
HardwareInfo detect_hardware();

// {"hardware": {...,"descriptor"}, "created_unix", "timings": [...], "rmse": [...],
//  "rtf": [...]} written atomically.
void write_result_log(const std::filesystem::path& path, const HardwareInfo& hardware,
                      const std::vector<TimingResult>& timings,
                      const std::vector<RmseResult>& rmse,
                      const std::vector<RtfRow>& rtf = {});

// Published results shipped under data/reference for formatting tests and
// side-by-side reports. They are not targets for this implementation.
struct ReferenceResults {
  std::vector<TimingResult> method_timings;
  std::vector<TimingResult> speaker_timings;
  std::vector<RtfRow> rtf;
  std::vector<RmseResult> rmse;
};
ReferenceResults load_reference_results(const std::filesystem::path& path);

}  // namespace emotts::eval
