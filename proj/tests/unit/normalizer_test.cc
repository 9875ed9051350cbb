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

#include "ckb/normalizer.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ckb/error.h"
#include "ckb/text_util.h"
#include "oracles.h"

namespace ckb {
namespace {

using testing::Script;

const RuleTable& Rules() {
  static const RuleTable rules = RuleTable::Load(testing::DataPath("standardization_rules.tsv"));
  return rules;
}

StandardizationRule MakeRule(std::string id, RuleCategory category,
                             const std::string& match,
                             const std::string& replacement) {
  StandardizationRule r;
  r.id = std::move(id);
  r.category = category;
  r.match = DecodeUtf8(match);
  r.replacement = DecodeUtf8(replacement);
  return r;
}

std::string ReplaceAll(std::string s, const std::string& from, const std::string& to) {
  std::string out;
  size_t pos = 0;
  for (size_t hit; (hit = s.find(from, pos)) != std::string::npos; pos = hit + from.size()) {
    out += s.substr(pos, hit - pos) + to;
  }
  return out + s.substr(pos);
}

TEST(NormalizeUnicodeTest, ArabicKafFolded) {
  EXPECT_EQ(NormalizeUnicode("كوردی", Script()), "کوردی");
}

TEST(NormalizeUnicodeTest, CanonicalTextUnchanged) {
  const std::string text = "ئەمە دەقێکی کوردییە، دەسەڵات و باران.";
  EXPECT_EQ(NormalizeUnicode(text, Script()), text);
}

TEST(NormalizeUnicodeTest, MixedVariantsMatchSequentialReplacement) {
  const std::string raw = "كوردي  ، ﻙ يەك";
  std::string oracle = ReplaceAll(raw, "ك", "ک");
  oracle = ReplaceAll(oracle, "ي", "ی");
  oracle = ReplaceAll(oracle, "ﻙ", "ک");
  oracle = ReplaceAll(oracle, "  ", " ");
  EXPECT_EQ(NormalizeUnicode(raw, Script()), oracle);
}

TEST(NormalizeUnicodeTest, DiacriticsAndZwnj) {
  EXPECT_EQ(NormalizeUnicode("دَل", Script()), "دل");
  EXPECT_EQ(NormalizeUnicode("هه‌ناسه‌", Script()), "هەناسە");
  NormalizerOptions keep;
  keep.strip_diacritics = false;
  EXPECT_EQ(NormalizeUnicode("دَل", Script(), keep), "دَل");
}

TEST(NormalizeUnicodeTest, InvalidEncoding) {
  try {
    NormalizeUnicode("\xff\xfe", Script());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidEncoding);
  }
}

std::string RandomText(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {
      "ب", "ک", "ك", "ي", "ی", "ە", "ه", "‌", "و", "وو", "ڕ", "ر", "َ", "ِ",
      " ", "  ", "،", ".", "؟", "!", "«", "»", "ﻙ", "ة", "آ", "1", "a", "\t"};
  std::string s;
  const int n = static_cast<int>(rng() % 30);
  for (int i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  return s;
}

TEST(NormalizeUnicodeTest, IdempotentOnRandomText) {
  std::mt19937 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const std::string once = NormalizeUnicode(RandomText(rng), Script());
    EXPECT_EQ(NormalizeUnicode(once, Script()), once);
  }
}

TEST(TokenizeTest, CommaIsPause) {
  const TokenStream s = Tokenize("دل، دل");
  ASSERT_EQ(s.items.size(), 3u);
  EXPECT_FALSE(s.items[0].is_pause);
  EXPECT_TRUE(s.items[1].is_pause);
  EXPECT_EQ(s.items[1].pause, PauseClass::kComma);
  EXPECT_FALSE(s.items[2].is_pause);
  EXPECT_EQ(s.Words(), (std::vector<std::string>{"دل", "دل"}));
}

TEST(TokenizeTest, EmptyInput) { EXPECT_TRUE(Tokenize("").items.empty()); }

TEST(TokenizeTest, PauseCountEqualsPunctuationCount) {
  const std::string text = "ئەمە یەکەمە. ئەوە دووەمە، و سێیەم؟ «بەڵێ»! کۆتایی: تەواو؛";
  size_t marks = 0;
  for (char32_t c : DecodeUtf8(text)) {
    for (char32_t p : std::u32string(U".،؟«»!:؛")) marks += (c == p) ? 1 : 0;
  }
  EXPECT_EQ(Tokenize(text).PauseCount(), marks);
}

TEST(TokenizeTest, LosslessAndPunctuationFree) {
  std::mt19937 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const std::string norm = NormalizeUnicode(RandomText(rng), Script());
    const TokenStream s = Tokenize(norm);
    EXPECT_EQ(s.Render(), norm);
    for (const TokenItem& item : s.items) {
      if (item.is_pause) continue;
      for (char32_t c : DecodeUtf8(item.text)) EXPECT_FALSE(IsPunctuation(c));
    }
  }
}

TEST(StandardizeTest, ListedVerbFormsStandardize) {
  EXPECT_EQ(Rules().Standardize("ئەکەوم"), "دەکەوم");
  EXPECT_EQ(Rules().Standardize("دەخوا"), "دەخوات");
  EXPECT_EQ(Rules().Standardize("دەس"), "دەست");
  EXPECT_EQ(Rules().Standardize("رەش"), "ڕەش");
}

TEST(StandardizeTest, NoMatchUnchanged) {
  EXPECT_EQ(Rules().Standardize("باران"), "باران");
}

TEST(StandardizeTest, BundledRulesAreFixedPoints) {
  for (const StandardizationRule& r : Rules().rules()) {
    const std::string out = EncodeUtf8(r.replacement);
    EXPECT_EQ(Rules().Standardize(Rules().Standardize(out)), Rules().Standardize(out)) << r.id;
  }
}

TEST(StandardizeTest, ChainedRulesReachIteratedFixedPoint) {
  const RuleTable table({MakeRule("a", RuleCategory::kLoanwordVariant, "ست", "سد"),
                         MakeRule("b", RuleCategory::kLoanwordVariant, "سدە", "زە"),
                         MakeRule("c", RuleCategory::kCharacterMap, "ك", "ک")});
  for (const std::string token : {"كەستە", "ستەست", "کەسدە", "باران"}) {
    std::string oracle = token;
    for (int i = 0; i < 100; ++i) {
      std::string next = ReplaceAll(oracle, "ك", "ک");
      next = ReplaceAll(next, "ست", "سد");
      next = ReplaceAll(next, "سدە", "زە");
      if (next == oracle) break;
      oracle = next;
    }
    EXPECT_EQ(table.Standardize(token), oracle) << token;
  }
}

TEST(StandardizeTest, ConflictingRulesReported) {
  const RuleTable table({MakeRule("a", RuleCategory::kLoanwordVariant, "کلتور", "کولتور"),
                         MakeRule("b", RuleCategory::kLoanwordVariant, "کلتور", "کەلتور")});
  try {
    table.Standardize("کلتور");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRuleConflict);
  }
  EXPECT_EQ(table.Standardize("باران"), "باران");
}

TEST(StandardizeTest, CyclingRulesHitCap) {
  const RuleTable table({MakeRule("a", RuleCategory::kLoanwordVariant, "با", "بزد"),
                         MakeRule("b", RuleCategory::kLoanwordVariant, "زد", "اا")});
  try {
    table.Standardize("با");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFixedPointCap);
  }
}

TEST(StandardizeTest, InvalidRulesRejected) {
  EXPECT_THROW(RuleTable({MakeRule("a", RuleCategory::kLoanwordVariant, "ب", "ب")}), Error);
  EXPECT_THROW(RuleTable({MakeRule("a", RuleCategory::kLoanwordVariant, "ب", "بب")}), Error);
  std::istringstream in("x\tbogus\tا\tە\tsrc\n");
  try {
    RuleTable::Parse(in, "r.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedFile);
  }
}

TEST(CorrectionTableTest, WholeTokensOnly) {
  const CorrectionTable table(std::map<std::string, std::string>{{"ولات", "وڵات"}});
  EXPECT_EQ(ApplyCorrectionTable("ولات کورد ولات", table), "وڵات کورد وڵات");
  EXPECT_EQ(ApplyCorrectionTable("ولاتەکە", table), "ولاتەکە");
  const std::string once = ApplyCorrectionTable("ولات، ولات", table);
  EXPECT_EQ(once, "وڵات، وڵات");
  EXPECT_EQ(ApplyCorrectionTable(once, table), once);
}

TEST(CorrectionTableTest, EmptyTableIsIdentity) {
  EXPECT_EQ(ApplyCorrectionTable("ولات کورد", CorrectionTable()), "ولات کورد");
}

TEST(CorrectionTableTest, ChainsResolvedAndCyclesRejected) {
  const CorrectionTable chain(std::map<std::string, std::string>{{"a", "b"}, {"b", "c"}});
  EXPECT_EQ(chain.Lookup("a"), "c");
  EXPECT_EQ(chain.Lookup("z"), "z");
  EXPECT_THROW(CorrectionTable(std::map<std::string, std::string>{{"a", "b"}, {"b", "a"}}), Error);
}

}  // namespace
}  // namespace ckb
