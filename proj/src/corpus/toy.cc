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

#include "emotts/corpus/toy.h"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"
#include "emotts/vocoder/wav.h"

namespace emotts::corpus {

namespace fs = std::filesystem;

namespace {

struct ToySentence {
  const char* text;
  const char* emotion;
};

constexpr ToySentence kSentences[] = {
    {"Keep an eye on him.", "neutral"},      {"That joke was so funny!", "amused"},
    {"I am so angry at you!", "anger"},      {"That smell is gross.", "disgust"},
    {"I am so tired.", "sleepiness"},        {"The author is here.", "neutral"},
    {"What a silly happy day!", "amused"},   {"Stop that right now!", "anger"},
    {"This food is rotten.", "disgust"},     {"Time to go to sleep.", "sleepiness"},
};

double speaker_f0(const std::string& speaker, std::size_t index) {
  if (speaker == "bea") return 210.0;
  if (speaker == "jenie") return 235.0;
  if (speaker == "josh") return 115.0;
  if (speaker == "sam") return 130.0;
  return 150.0 + 20.0 * static_cast<double>(index % 4);
}

double emotion_pitch_scale(int emotion) {
  constexpr double kScale[] = {1.15, 1.1, 0.95, 1.0, 0.85};
  return kScale[emotion];
}

double emotion_gain(int emotion) {
  constexpr double kGain[] = {0.35, 0.5, 0.3, 0.3, 0.18};
  return kGain[emotion];
}

bool is_vowel(const std::string& p) { return !p.empty() && std::isdigit(static_cast<unsigned char>(p.back())); }

// Stable per-phoneme "formant" in 300-2800 Hz.
double formant_of(const std::string& p) {
  const auto h = std::hash<std::string>{}(p.substr(0, 2));
  return 300.0 + static_cast<double>(h % 2500);
}

std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

const std::vector<std::string>& pronounce(const std::string& word) {
  for (const auto& [w, phones] : toy_lexicon()) {
    if (w == word) return phones;
  }
  throw ConfigError("toy lexicon lacks '" + word + "'");
}

}  // namespace

const std::vector<std::pair<std::string, std::vector<std::string>>>& toy_lexicon() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> lex = {
      {"a", {"AH0"}}, {"am", {"AE1", "M"}}, {"an", {"AH0", "N"}},
      {"angry", {"AE1", "NG", "G", "R", "IY0"}}, {"at", {"AE1", "T"}},
      {"author", {"AO1", "TH", "ER0"}}, {"day", {"D", "EY1"}}, {"eye", {"AY1"}},
      {"food", {"F", "UW1", "D"}}, {"funny", {"F", "AH1", "N", "IY0"}}, {"go", {"G", "OW1"}},
      {"gross", {"G", "R", "OW1", "S"}}, {"happy", {"HH", "AE1", "P", "IY0"}},
      {"here", {"HH", "IY1", "R"}}, {"him", {"HH", "IH1", "M"}}, {"i", {"AY1"}},
      {"is", {"IH1", "Z"}}, {"joke", {"JH", "OW1", "K"}}, {"keep", {"K", "IY1", "P"}},
      {"now", {"N", "AW1"}}, {"on", {"AA1", "N"}}, {"right", {"R", "AY1", "T"}},
      {"rotten", {"R", "AA1", "T", "AH0", "N"}}, {"silly", {"S", "IH1", "L", "IY0"}},
      {"sleep", {"S", "L", "IY1", "P"}}, {"smell", {"S", "M", "EH1", "L"}},
      {"so", {"S", "OW1"}}, {"stop", {"S", "T", "AA1", "P"}}, {"that", {"DH", "AE1", "T"}},
      {"the", {"DH", "AH0"}}, {"this", {"DH", "IH1", "S"}}, {"time", {"T", "AY1", "M"}},
      {"tired", {"T", "AY1", "ER0", "D"}}, {"to", {"T", "UW1"}}, {"was", {"W", "AA1", "Z"}},
      {"what", {"W", "AH1", "T"}}, {"you", {"Y", "UW1"}},
  };
  return lex;
}

std::vector<ToyUtterance> make_toy_corpus(const ToyCorpusOptions& options) {
  if (options.speakers.empty()) throw ConfigError("toy corpus needs at least one speaker");
  if (options.sample_rate <= 0) throw ConfigError("toy corpus sample rate must be positive");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sr = options.sample_rate;
  constexpr std::size_t kSentenceCount = sizeof(kSentences) / sizeof(kSentences[0]);

  std::vector<ToyUtterance> out;
  for (int u = 0; u < options.utterances; ++u) {
    const auto& sentence = kSentences[static_cast<std::size_t>(u) % kSentenceCount];
    const auto speaker_index = static_cast<std::size_t>(u) % options.speakers.size();
    ToyUtterance utt;
    auto& rec = utt.record;
    rec.speaker_id = options.speakers[speaker_index];
    rec.emotion = EmotionLabel::from_name(sentence.emotion);
    rec.text = sentence.text;
    char id[96];
    std::snprintf(id, sizeof(id), "%s_%s_%04d", sentence.emotion, rec.speaker_id.c_str(), u + 1);
    rec.file_id = id;
    for (const auto& w : words_of(sentence.text)) {
      const auto& phones = pronounce(w);
      rec.phonemes.insert(rec.phonemes.end(), phones.begin(), phones.end());
    }

    const double f0 = speaker_f0(rec.speaker_id, speaker_index) * emotion_pitch_scale(rec.emotion.id);
    const double gain = emotion_gain(rec.emotion.id);
    std::vector<double> samples;
    auto append_silence = [&](double seconds) {
      const auto n = static_cast<std::size_t>(std::llround(seconds * sr));
      for (std::size_t i = 0; i < n; ++i) samples.push_back(1e-4 * gauss(rng));
    };
    utt.phones.name = "phones";
    append_silence(options.leading_silence);
    if (options.leading_silence > 0) {
      utt.phones.intervals.push_back({"", 0.0, static_cast<double>(samples.size()) / sr});
    }
    double phase = 0.0;
    for (const auto& p : rec.phonemes) {
      const bool vowel = is_vowel(p);
      const double seconds = vowel ? 0.09 + 0.08 * unit(rng) : 0.05 + 0.05 * unit(rng);
      const auto n = static_cast<std::size_t>(std::llround(seconds * sr));
      const double formant = formant_of(p);
      const double start = static_cast<double>(samples.size()) / sr;
      const auto ramp = static_cast<std::size_t>(0.005 * sr);
      double lp = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double env = std::min({1.0, static_cast<double>(i + 1) / ramp,
                                     static_cast<double>(n - i) / ramp});
        // Slight declination over the phoneme.
        const double f = f0 * (1.0 - 0.05 * static_cast<double>(i) / n);
        phase += 2.0 * std::numbers::pi * f / sr;
        double s = 0.0;
        if (vowel) {
          for (int k = 1; k * f < 0.45 * sr && k <= 30; ++k) {
            const double hk = k * f;
            const double shape = std::exp(-std::pow((hk - formant) / 400.0, 2.0)) + 0.3 / k;
            s += shape * std::sin(k * phase);
          }
          s *= gain / 2.5;
        } else {
          lp = 0.6 * lp + 0.4 * gauss(rng);
          s = 0.25 * gain * lp + 0.1 * gain * std::sin(phase);
        }
        samples.push_back(env * s);
      }
      utt.phones.intervals.push_back({p, start, static_cast<double>(samples.size()) / sr});
    }
    const double speech_end = static_cast<double>(samples.size()) / sr;
    append_silence(options.trailing_silence);
    if (options.trailing_silence > 0) {
      utt.phones.intervals.push_back({"", speech_end, static_cast<double>(samples.size()) / sr});
    }
    utt.audio.sample_rate = options.sample_rate;
    utt.audio.samples = Eigen::Map<Eigen::VectorXd>(samples.data(), static_cast<Eigen::Index>(samples.size()));
    out.push_back(std::move(utt));
  }
  return out;
}

std::vector<ToyUtterance> write_toy_corpus(const fs::path& dir, const ToyCorpusOptions& options) {
  auto corpus = make_toy_corpus(options);
  fs::create_directories(dir / "wavs");
  fs::create_directories(dir / "textgrids");
  std::vector<MetadataRecord> records;
  for (const auto& u : corpus) {
    vocoder::write_wav(u.audio, dir / "wavs" / (u.record.file_id + ".wav"));
    IntervalTier words{"words", {}};
    if (!u.phones.intervals.empty()) {
      words.intervals.push_back({u.record.text, u.phones.intervals.front().xmin,
                                 u.phones.intervals.back().xmax});
    }
    io::write_text_atomic(dir / "textgrids" / (u.record.file_id + ".TextGrid"),
                          emit_textgrid({words, u.phones}));
    records.push_back(u.record);
  }
  io::write_text_atomic(dir / "metadata.txt", serialize_metadata(records));
  std::ostringstream lex;
  for (const auto& [word, phones] : toy_lexicon()) {
    lex << word;
    for (const auto& p : phones) lex << ' ' << p;
    lex << '\n';
  }
  io::write_text_atomic(dir / "lexicon.txt", lex.str());
  std::ostringstream tsv;
  for (const auto& s : kSentences) tsv << s.text << '\t' << s.emotion << '\n';
  io::write_text_atomic(dir / "classifier.tsv", tsv.str());
  return corpus;
}

}  // namespace emotts::corpus
