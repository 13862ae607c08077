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

#include "emotts/eval/report.h"

#include <sys/utsname.h>

#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"

namespace emotts::eval {

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

// Footnotes for (speaker, emotion) pairs in `expected` that have no row.
template <typename Result>
std::vector<std::string> coverage_footer(const std::vector<Result>& results,
                                         const std::vector<std::string>& expected) {
  std::vector<std::string> footer;
  if (expected.empty()) return footer;
  std::vector<std::string> speakers;
  std::map<std::string, std::set<std::string>> covered;
  for (const auto& r : results) {
    if (!covered.contains(r.speaker)) speakers.push_back(r.speaker);
    covered[r.speaker].insert(r.emotion);
  }
  for (const auto& speaker : speakers) {
    std::string missing;
    for (const auto& e : expected) {
      if (covered[speaker].contains(e)) continue;
      missing += (missing.empty() ? "" : ", ") + e;
    }
    if (!missing.empty()) footer.push_back("no " + missing + " result for " + speaker);
  }
  return footer;
}

bool needs_quotes(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

std::string first_line_matching(const std::filesystem::path& path, const std::string& key) {
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(key, 0) != 0) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    auto value = line.substr(colon + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    return value;
  }
  return {};
}

}  // namespace

Table timing_table(const std::vector<TimingResult>& results, const TableOptions& options) {
  Table t;
  if (options.include_method) t.header.push_back("Method");
  for (const char* h :
       {"Speaker", "Gender", "Emotion", "Sample ID", "Time (s)", "Words", "Audio (s)", "RTF",
        "Repeats"}) {
    t.header.emplace_back(h);
  }
  for (const auto& r : results) {
    std::vector<std::string> row;
    if (options.include_method) row.push_back(to_string(r.method));
    row.insert(row.end(), {r.speaker, r.gender, r.emotion, r.sample_id, fixed(r.wall_seconds, 3),
                           std::to_string(r.word_count)});
    if (r.audio_seconds > 0.0) {
      row.push_back(fixed(r.audio_seconds, 3));
      row.push_back(fixed(r.rtf(), 3));
    } else {
      row.insert(row.end(), {"-", "-"});
    }
    row.push_back(std::to_string(r.repeats));
    t.rows.push_back(std::move(row));
  }
  t.footer = coverage_footer(results, options.expected_emotions);
  return t;
}

Table rmse_table(const std::vector<RmseResult>& results, const TableOptions& options) {
  Table t;
  t.header = {"Speaker", "Gender", "Emotion", "Sample", "RMSE", "Padded"};
  for (const auto& r : results) {
    t.rows.push_back({r.speaker, r.gender, r.emotion, r.sample_id, fixed(r.rmse, 4),
                      r.padded ? "yes" : "no"});
  }
  t.footer = coverage_footer(results, options.expected_emotions);
  return t;
}

Table rtf_table(const std::vector<RtfRow>& rows) {
  Table t;
  t.header = {"System", "Vocoder", "RTF", "Hardware"};
  for (const auto& r : rows) t.rows.push_back({r.system, r.vocoder, fixed(r.rtf, 3), r.hardware});
  return t;
}

std::string render_csv(const Table& table) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      const std::string& f = fields[i];
      if (!needs_quotes(f)) {
        out += f;
        continue;
      }
      out += '"';
      for (char c : f) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    }
    out += "\r\n";
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out;
}

std::string render_text(const Table& table) {
  std::vector<std::size_t> width(table.header.size(), 0);
  auto measure = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  };
  measure(table.header);
  for (const auto& row : table.rows) measure(row);

  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < row.size() ? row[i] : "";
      if (i > 0) line += "  ";
      line += cell + std::string(width[i] - cell.size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  };
  emit(table.header);
  std::size_t total = 0;
  for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i > 0 ? 2 : 0);
  out += std::string(total, '-') + "\n";
  for (const auto& row : table.rows) emit(row);
  for (const auto& note : table.footer) out += "* " + note + "\n";
  return out;
}

ReportFiles emit_report(const Table& table, const std::filesystem::path& dir,
                        const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create report directory " + dir.string() + ": " + ec.message());
  ReportFiles files{dir / (stem + ".csv"), dir / (stem + ".txt")};
  io::write_text_atomic(files.csv, render_csv(table));
  io::write_text_atomic(files.text, render_text(table));
  return files;
}

std::string HardwareInfo::descriptor() const {
  std::ostringstream s;
  s << (cpu_model.empty() ? "unknown CPU" : cpu_model) << " (" << logical_cores << " threads), "
    << os << ", " << compiler;
  if (!build_type.empty()) s << ", " << build_type;
  return s.str();
}

HardwareInfo detect_hardware() {
  HardwareInfo h;
  h.cpu_model = first_line_matching("/proc/cpuinfo", "model name");
  h.logical_cores = static_cast<int>(std::thread::hardware_concurrency());
  utsname u{};
  if (uname(&u) == 0) h.os = std::string(u.sysname) + " " + u.release + " " + u.machine;
#if defined(__clang__)
  h.compiler = "Clang " __clang_version__;
#elif defined(__GNUC__)
  h.compiler = "GCC " __VERSION__;
#else
  h.compiler = "unknown compiler";
#endif
#ifdef NDEBUG
  h.build_type = "optimized";
#else
  h.build_type = "debug";
#endif
  return h;
}

void write_result_log(const std::filesystem::path& path, const HardwareInfo& hardware,
                      const std::vector<TimingResult>& timings,
                      const std::vector<RmseResult>& rmse, const std::vector<RtfRow>& rtf) {
  nlohmann::json hw = hardware;
  hw["descriptor"] = hardware.descriptor();
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  const nlohmann::json log = {
      {"hardware", hw},
      {"created_unix", std::chrono::duration_cast<std::chrono::seconds>(now).count()},
      {"timings", timings},
      {"rmse", rmse},
      {"rtf", rtf}};
  io::write_text_atomic(path, log.dump(2) + "\n");
}

ReferenceResults load_reference_results(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  ReferenceResults r;
  try {
    r.method_timings = j.at("method_timings").get<std::vector<TimingResult>>();
    r.speaker_timings = j.at("speaker_timings").get<std::vector<TimingResult>>();
    r.rtf = j.at("rtf").get<std::vector<RtfRow>>();
    r.rmse = j.at("rmse").get<std::vector<RmseResult>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return r;
}

}  // namespace emotts::eval
