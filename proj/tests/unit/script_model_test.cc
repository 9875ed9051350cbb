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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "ckb/error.h"
#include "ckb/text_util.h"
#include "oracles.h"

namespace ckb {
namespace {

using testing::Script;

TEST(ScriptModelTest, InventoryMatchesReferenceRows) {
  const auto& inv = Script().PhonemeInventory();
  ASSERT_EQ(inv.size(), 37u);
  const auto& rows = testing::ReferenceInventory();
  ASSERT_EQ(rows.size(), 37u);
  for (size_t i = 0; i < inv.size(); ++i) {
    SCOPED_TRACE(rows[i].code);
    EXPECT_EQ(inv[i].row, static_cast<int>(i + 1));
    EXPECT_EQ(inv[i].code, rows[i].code);
    EXPECT_EQ(inv[i].ipa, rows[i].ipa);
    EXPECT_EQ(inv[i].category, rows[i].category);
    EXPECT_EQ(inv[i].is_vowel, i >= 29);
  }
}

TEST(ScriptModelTest, CodesUniqueAndEightVowels) {
  std::set<std::string> codes;
  int vowels = 0;
  for (const Phoneme& p : Script().PhonemeInventory()) {
    codes.insert(p.code);
    vowels += p.is_vowel ? 1 : 0;
  }
  EXPECT_EQ(codes.size(), 37u);
  EXPECT_EQ(vowels, 8);
}

TEST(ScriptModelTest, ShortVowelIsUnwritten) {
  const Phoneme* ix = Script().FindPhoneme("ix");
  ASSERT_NE(ix, nullptr);
  EXPECT_EQ(ix->ipa, "ɪ");
  for (const Grapheme& g : Script().Alphabet()) {
    for (const std::string& c : g.candidate_phonemes) EXPECT_NE(c, "ix");
  }
}

TEST(ScriptModelTest, GraphemeCandidates) {
  using V = std::vector<std::string>;
  EXPECT_EQ(Script().GraphemeCandidates(U"ب"), V{"b"});
  EXPECT_EQ(Script().GraphemeCandidates(U"ی"), (V{"y", "i"}));
  EXPECT_EQ(Script().GraphemeCandidates(U"و"), (V{"w", "u"}));
  EXPECT_EQ(Script().GraphemeCandidates(U"وو"), V{"uu"});
  try {
    Script().GraphemeCandidates(U"ث");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnknownGrapheme);
  }
}

TEST(ScriptModelTest, EveryLetterHasCandidates) {
  for (const Grapheme& g : Script().Alphabet()) {
    SCOPED_TRACE(EncodeUtf8(g.codepoints));
    EXPECT_FALSE(g.candidate_phonemes.empty());
    for (const std::string& c : g.candidate_phonemes) {
      EXPECT_NE(Script().FindPhoneme(c), nullptr);
    }
  }
}

TEST(ScriptModelTest, LanguageClassesFollowLetterComparison) {
  const auto cls = [](const char* s) {
    return Script().ClassifyLetter(DecodeUtf8(s)[0]);
  };
  for (const char* s : {"ڤ", "ڕ", "ڵ", "ە", "ێ", "ۆ"}) {
    EXPECT_EQ(cls(s), LanguageClass::kKurdishOnly) << s;
  }
  for (const char* s : {"ژ", "پ", "چ", "گ"}) {
    EXPECT_EQ(cls(s), LanguageClass::kKurdishPersian) << s;
  }
  for (const char* s : {"ئ", "ا", "ب", "ت", "ج", "ح", "خ", "د", "ر", "ز",
                        "س", "ش", "ع", "غ", "ف", "ق", "ک", "ل", "م", "ن",
                        "و", "ه", "ی"}) {
    EXPECT_EQ(cls(s), LanguageClass::kKurdishPersianArabic) << s;
  }
  for (const char* s : {"ث", "ص", "ض", "ذ", "ظ", "ط"}) {
    EXPECT_EQ(cls(s), LanguageClass::kPersianArabic) << s;
  }
  try {
    cls("A");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnknownLetter);
  }
}

TEST(ScriptModelTest, SegmentTakesDigraph) {
  const auto units = Script().Segment(U"بووک");
  ASSERT_EQ(units.size(), 3u);
  EXPECT_EQ(units[1].grapheme->codepoints, U"وو");
  EXPECT_EQ(units[2].begin, 3u);
}

TEST(ScriptModelTest, MalformedFileReportsLine) {
  std::istringstream in("version\t1\nphoneme\t1\tb\n");
  try {
    ScriptModel::Parse(in, "bad.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedFile);
    EXPECT_NE(std::string(e.what()).find("bad.tsv:2"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace ckb
