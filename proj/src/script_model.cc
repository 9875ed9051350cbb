// Copyright 2026 The ckb-speech Authors.
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

#include "ckb/script_model.h"

#include <cstdlib>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "ckb/error.h"
#include "ckb/text_util.h"

#ifndef CKB_DEFAULT_DATA_DIR
#define CKB_DEFAULT_DATA_DIR "data"
#endif

namespace ckb {

namespace {

struct CategoryEntry {
  std::string_view name;
  PhonemeCategory category;
  int sonority;
};

constexpr CategoryEntry kCategories[] = {
    {"voiced-stop", PhonemeCategory::kVoicedStop, 0},
    {"voiced-fricative", PhonemeCategory::kVoicedFricative, 1},
    {"unvoiced-stop", PhonemeCategory::kUnvoicedStop, 0},
    {"unvoiced-fricative", PhonemeCategory::kUnvoicedFricative, 1},
    {"vibrant", PhonemeCategory::kVibrant, 1},
    {"flap", PhonemeCategory::kFlap, 3},
    {"trill", PhonemeCategory::kTrill, 3},
    {"lateral", PhonemeCategory::kLateral, 3},
    {"nasal", PhonemeCategory::kNasal, 2},
    {"approximant", PhonemeCategory::kApproximant, 4},
    {"vowel", PhonemeCategory::kVowel, 5},
};

constexpr std::pair<std::string_view, LanguageClass> kClasses[] = {
    {"kurdish-only", LanguageClass::kKurdishOnly},
    {"kurdish-persian", LanguageClass::kKurdishPersian},
    {"kurdish-persian-arabic", LanguageClass::kKurdishPersianArabic},
    {"persian-arabic", LanguageClass::kPersianArabic},
};

[[noreturn]] void Malformed(const std::string& source, size_t line,
                            const std::string& what) {
  throw Error(ErrorKind::kMalformedFile,
              fmt::format("{}:{}: {}", source, line, what));
}

std::string Hex(char32_t c) {
  return fmt::format("U+{:04X}", static_cast<uint32_t>(c));
}

}  // namespace

std::string_view CategoryName(PhonemeCategory category) {
  for (const auto& e : kCategories) {
    if (e.category == category) return e.name;
  }
  return "unknown";
}

std::string_view LanguageClassName(LanguageClass language_class) {
  for (const auto& [name, cls] : kClasses) {
    if (cls == language_class) return name;
  }
  return "unknown";
}

ScriptModel ScriptModel::Parse(std::istream& in,
                               const std::string& source_name) {
  ScriptModel model;
  std::string line;
  size_t line_no = 0;
  std::vector<std::pair<size_t, std::vector<std::string>>> letter_lines;

  auto parse_class = [&](const std::string& name) {
    for (const auto& [n, cls] : kClasses) {
      if (n == name) return cls;
    }
    Malformed(source_name, line_no, "unknown language class '" + name + "'");
  };
  auto single_codepoint = [&](const std::string& field) {
    std::u32string cps;
    try {
      cps = DecodeUtf8(field);
    } catch (const Error& e) {
      Malformed(source_name, line_no, e.what());
    }
    if (cps.size() != 1) {
      Malformed(source_name, line_no, "expected one codepoint: " + field);
    }
    return cps[0];
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    const std::vector<std::string> f = SplitTabs(line);
    const std::string& kind = f[0];
    if (kind == "version") {
      if (f.size() != 2) Malformed(source_name, line_no, "bad version record");
      model.version_ = std::atoi(f[1].c_str());
      if (model.version_ <= 0) Malformed(source_name, line_no, "bad version");
    } else if (kind == "phoneme") {
      if (f.size() != 5) {
        Malformed(source_name, line_no, "phoneme record needs 5 fields");
      }
      Phoneme p;
      p.row = std::atoi(f[1].c_str());
      p.code = f[2];
      p.ipa = f[3];
      bool found = false;
      for (const auto& e : kCategories) {
        if (e.name == f[4]) {
          p.category = e.category;
          found = true;
        }
      }
      if (!found) Malformed(source_name, line_no, "unknown category " + f[4]);
      p.is_vowel = p.category == PhonemeCategory::kVowel;
      if (p.code.empty()) Malformed(source_name, line_no, "empty code");
      if (model.phoneme_index_.count(p.code)) {
        Malformed(source_name, line_no, "duplicate phoneme code " + p.code);
      }
      model.phoneme_index_[p.code] = static_cast<int>(model.inventory_.size());
      model.inventory_.push_back(std::move(p));
    } else if (kind == "letter") {
      if (f.size() != 4) {
        Malformed(source_name, line_no, "letter record needs 4 fields");
      }
      letter_lines.emplace_back(line_no, f);
    } else if (kind == "foreign") {
      if (f.size() != 3) {
        Malformed(source_name, line_no, "foreign record needs 3 fields");
      }
      model.foreign_[single_codepoint(f[1])] = parse_class(f[2]);
    } else if (kind == "variant") {
      if (f.size() != 3) {
        Malformed(source_name, line_no, "variant record needs 3 fields");
      }
      const char32_t from = single_codepoint(f[1]);
      std::u32string to;
      try {
        to = DecodeUtf8(f[2]);
      } catch (const Error& e) {
        Malformed(source_name, line_no, e.what());
      }
      if (to.empty()) Malformed(source_name, line_no, "empty variant target");
      model.variants_[from] = to;
    } else {
      Malformed(source_name, line_no, "unknown record kind '" + kind + "'");
    }
  }
  if (model.version_ == 0) Malformed(source_name, line_no, "missing version");

  // Letters are resolved after all phonemes are known.
  for (const auto& [ln, f] : letter_lines) {
    line_no = ln;
    Grapheme g;
    try {
      g.codepoints = DecodeUtf8(f[1]);
    } catch (const Error& e) {
      Malformed(source_name, ln, e.what());
    }
    if (g.codepoints.empty() || g.codepoints.size() > 2) {
      Malformed(source_name, ln, "grapheme must be one or two codepoints");
    }
    size_t start = 0;
    const std::string& codes = f[2];
    while (start <= codes.size()) {
      size_t comma = codes.find(',', start);
      if (comma == std::string::npos) comma = codes.size();
      std::string code = std::string(TrimAscii(
          std::string_view(codes).substr(start, comma - start)));
      if (!code.empty()) {
        if (!model.phoneme_index_.count(code)) {
          Malformed(source_name, ln, "letter maps to unknown phoneme " + code);
        }
        g.candidate_phonemes.push_back(std::move(code));
      }
      start = comma + 1;
    }
    if (g.candidate_phonemes.empty()) {
      Malformed(source_name, ln, "letter without candidate phonemes");
    }
    g.language_class = parse_class(f[3]);
    if (g.language_class == LanguageClass::kPersianArabic) {
      Malformed(source_name, ln, "Sorani letter cannot be persian-arabic");
    }
    if (model.grapheme_index_.count(g.codepoints)) {
      Malformed(source_name, ln, "duplicate letter " + f[1]);
    }
    model.grapheme_index_[g.codepoints] = model.alphabet_.size();
    model.alphabet_.push_back(std::move(g));
  }
  for (const auto& [from, to] : model.variants_) {
    if (model.grapheme_index_.count(std::u32string(1, from))) {
      Malformed(source_name, line_no,
                "variant source " + Hex(from) + " is itself a Sorani letter");
    }
  }
  return model;
}

ScriptModel ScriptModel::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open script table " + path);
  return Parse(in, path);
}

std::string ScriptModel::DefaultDataDir() {
  if (const char* env = std::getenv("CKB_DATA_DIR"); env && *env) return env;
  return CKB_DEFAULT_DATA_DIR;
}

const ScriptModel& ScriptModel::Default() {
  static const ScriptModel model = Load(DefaultDataDir() + "/sorani_script.tsv");
  return model;
}

const Phoneme* ScriptModel::FindPhoneme(std::string_view code) const {
  auto it = phoneme_index_.find(code);
  return it == phoneme_index_.end() ? nullptr : &inventory_[it->second];
}

int ScriptModel::PhonemeIndex(std::string_view code) const {
  auto it = phoneme_index_.find(code);
  if (it == phoneme_index_.end()) {
    throw Error(ErrorKind::kUnknownPhoneme,
                fmt::format("'{}' is not in the phoneme inventory", code));
  }
  return it->second;
}

bool ScriptModel::IsVowel(std::string_view code) const {
  return inventory_[PhonemeIndex(code)].is_vowel;
}

int ScriptModel::Sonority(std::string_view code) const {
  const PhonemeCategory category = inventory_[PhonemeIndex(code)].category;
  for (const auto& e : kCategories) {
    if (e.category == category) return e.sonority;
  }
  return 0;
}

const Grapheme& ScriptModel::FindGrapheme(
    std::u32string_view codepoints) const {
  auto it = grapheme_index_.find(codepoints);
  if (it == grapheme_index_.end()) {
    std::string hex;
    for (char32_t c : codepoints) hex += (hex.empty() ? "" : " ") + Hex(c);
    throw Error(ErrorKind::kUnknownGrapheme,
                fmt::format("'{}' ({}) is not a Sorani letter",
                            EncodeUtf8(codepoints), hex));
  }
  return alphabet_[it->second];
}

const std::vector<std::string>& ScriptModel::GraphemeCandidates(
    std::u32string_view codepoints) const {
  return FindGrapheme(codepoints).candidate_phonemes;
}

bool ScriptModel::IsSoraniLetter(char32_t c) const {
  return grapheme_index_.count(std::u32string(1, c)) > 0;
}

LanguageClass ScriptModel::ClassifyLetter(char32_t c) const {
  const std::u32string key(1, c);
  if (auto it = grapheme_index_.find(key); it != grapheme_index_.end()) {
    return alphabet_[it->second].language_class;
  }
  if (auto it = foreign_.find(c); it != foreign_.end()) return it->second;
  if (auto it = variants_.find(c); it != variants_.end()) {
    // A variant shares the class of the letter it folds to.
    return ClassifyLetter(it->second.back());
  }
  throw Error(ErrorKind::kUnknownLetter,
              fmt::format("'{}' ({}) is not a Kurdish, Persian or Arabic letter",
                          EncodeUtf8(c), Hex(c)));
}

std::vector<GraphemeUnit> ScriptModel::Segment(std::u32string_view word) const {
  std::vector<GraphemeUnit> units;
  size_t i = 0;
  while (i < word.size()) {
    if (i + 1 < word.size()) {
      auto it = grapheme_index_.find(word.substr(i, 2));
      if (it != grapheme_index_.end()) {
        units.push_back({&alphabet_[it->second], i});
        i += 2;
        continue;
      }
    }
    units.push_back({&FindGrapheme(word.substr(i, 1)), i});
    ++i;
  }
  return units;
}

}  // namespace ckb
