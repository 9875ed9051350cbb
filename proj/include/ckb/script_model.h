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

// Model of the Central Kurdish (Sorani) writing system: the 37-phoneme
// inventory, the Arabic-based alphabet with its candidate phonemes, and the
// letter classes that set Sorani apart from Persian and Arabic. The tables are
// loaded from a versioned data file (data/sorani_script.tsv) and immutable
// afterwards, so one instance may be shared freely across threads.

#ifndef CKB_SCRIPT_MODEL_H_
#define CKB_SCRIPT_MODEL_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ckb {

enum class PhonemeCategory {
  kVoicedStop,
  kVoicedFricative,
  kUnvoicedStop,
  kUnvoicedFricative,
  kVibrant,
  kFlap,
  kTrill,
  kLateral,
  kNasal,
  kApproximant,
  kVowel,
};

enum class LanguageClass {
  kKurdishOnly,
  kKurdishPersian,
  kKurdishPersianArabic,
  kPersianArabic,  // not part of the Sorani alphabet
};

std::string_view CategoryName(PhonemeCategory category);
std::string_view LanguageClassName(LanguageClass language_class);

struct Phoneme {
  int row = 0;  // position in the reference phoneme table, 1-based
  std::string code;
  std::string ipa;
  PhonemeCategory category = PhonemeCategory::kVowel;
  bool is_vowel = false;
};

struct Grapheme {
  std::u32string codepoints;  // one letter, or two for the وو digraph
  std::vector<std::string> candidate_phonemes;
  LanguageClass language_class = LanguageClass::kKurdishPersianArabic;

  bool is_digraph() const { return codepoints.size() > 1; }
};

// One unit of a segmented word. `begin` indexes the codepoint sequence the
// unit was cut from.
struct GraphemeUnit {
  const Grapheme* grapheme = nullptr;
  size_t begin = 0;
};

class ScriptModel {
 public:
  // Throws Error(kMalformedFile) with a line diagnostic.
  static ScriptModel Parse(std::istream& in, const std::string& source_name);
  static ScriptModel Load(const std::string& path);

  // Shared instance loaded from DefaultDataDir()/sorani_script.tsv.
  static const ScriptModel& Default();
  // $CKB_DATA_DIR if set, else the data directory of the source tree.
  static std::string DefaultDataDir();

  int version() const { return version_; }

  // Reference-table row order.
  const std::vector<Phoneme>& PhonemeInventory() const { return inventory_; }
  const Phoneme* FindPhoneme(std::string_view code) const;
  // Index into PhonemeInventory(); throws Error(kUnknownPhoneme).
  int PhonemeIndex(std::string_view code) const;
  bool IsVowel(std::string_view code) const;
  // Sonority rank used for coda well-formedness: stops 0, fricatives 1,
  // nasals 2, liquids 3, glides 4, vowels 5.
  int Sonority(std::string_view code) const;

  const std::vector<Grapheme>& Alphabet() const { return alphabet_; }
  // Throws Error(kUnknownGrapheme) for anything outside the alphabet.
  const Grapheme& FindGrapheme(std::u32string_view codepoints) const;
  const std::vector<std::string>& GraphemeCandidates(
      std::u32string_view codepoints) const;
  bool IsSoraniLetter(char32_t c) const;

  // Throws Error(kUnknownLetter) for letters outside all modeled sets.
  LanguageClass ClassifyLetter(char32_t c) const;

  // Visual variant folding, e.g. Arabic kaf to Kurdish kaf.
  const std::map<char32_t, std::u32string>& Variants() const {
    return variants_;
  }

  // Maximal-munch segmentation; the وو digraph is taken whenever two و are
  // adjacent. Throws Error(kUnknownGrapheme) naming the offending character.
  std::vector<GraphemeUnit> Segment(std::u32string_view word) const;

 private:
  int version_ = 0;
  std::vector<Phoneme> inventory_;
  std::map<std::string, int, std::less<>> phoneme_index_;
  std::vector<Grapheme> alphabet_;
  std::map<std::u32string, size_t, std::less<>> grapheme_index_;
  std::map<char32_t, LanguageClass> foreign_;
  std::map<char32_t, std::u32string> variants_;
};

}  // namespace ckb

#endif  // CKB_SCRIPT_MODEL_H_
