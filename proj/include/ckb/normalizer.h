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

// Text canonicalization for Central Kurdish: Unicode folding, tokenization
// into words and pauses, rule-driven script standardization and whole-token
// corrections.

#ifndef CKB_NORMALIZER_H_
#define CKB_NORMALIZER_H_

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ckb/script_model.h"

namespace ckb {

struct NormalizerOptions {
  bool strip_diacritics = true;
  // Legacy encoding: ه followed by ZWNJ stands for ە.
  bool fold_heh_zwnj = true;
  bool strip_zwnj = true;
};

// NFKC, variant folding from the script model, removal of tatweel and
// invisible formatting characters, optional diacritic stripping and
// whitespace collapsing. Idempotent. Throws Error(kInvalidEncoding).
std::string NormalizeUnicode(std::string_view raw, const ScriptModel& script,
                             const NormalizerOptions& options = {});

// ---------------------------------------------------------------------------
// Tokenization

enum class PauseClass {
  kComma,
  kPeriod,
  kQuestion,
  kExclamation,
  kColon,
  kSemicolon,
  kQuote,
  kBracket,
  kDash,
  kOther,
};

std::string_view PauseClassName(PauseClass pause);
bool IsPunctuation(char32_t c);
PauseClass ClassifyPunctuation(char32_t c);

struct TokenItem {
  bool is_pause = false;
  std::string text;  // token graphemes, or the punctuation mark
  PauseClass pause = PauseClass::kOther;
  bool space_before = false;
};

struct TokenStream {
  std::vector<TokenItem> items;

  // Reassembles the normalized text the stream was built from.
  std::string Render() const;
  std::vector<std::string> Words() const;
  size_t PauseCount() const;
};

// Every punctuation codepoint becomes its own pause item.
TokenStream Tokenize(std::string_view normalized_text);

// ---------------------------------------------------------------------------
// Script standardization

enum class RuleCategory {
  kCharacterMap,
  kVerbMorphology,
  kNounAdjectiveMorphology,
  kLoanwordVariant,
};

std::string_view RuleCategoryName(RuleCategory category);

struct StandardizationRule {
  std::string id;
  RuleCategory category = RuleCategory::kCharacterMap;
  std::u32string match;  // without anchors
  bool anchor_start = false;
  bool anchor_end = false;
  std::u32string replacement;
  std::string source;

  std::string MatchPattern() const;  // with anchors, as written in the file
};

class RuleTable {
 public:
  static constexpr int kMaxRounds = 100;

  RuleTable() = default;
  // Validates each rule (non-trivial, idempotent on its own output) and
  // fixes the application order. Throws Error(kInvalidRule).
  explicit RuleTable(std::vector<StandardizationRule> rules);

  // TSV: id, category, match, replacement, source.
  static RuleTable Parse(std::istream& in, const std::string& source_name);
  static RuleTable Load(const std::string& path);

  // Rules in application order: character maps by id, then the rest by
  // decreasing match length, ties by id.
  const std::vector<StandardizationRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

  // Iterates rounds of ordered rule application until nothing changes.
  // Throws Error(kRuleConflict) when two equal-priority rules with the same
  // pattern but different replacements both match, and Error(kFixedPointCap)
  // if no fixed point is reached within kMaxRounds.
  std::string Standardize(std::string_view token) const;

  // One application of a single rule to all non-overlapping occurrences.
  static std::u32string ApplyRule(const StandardizationRule& rule,
                                  std::u32string_view token);
  static bool Matches(const StandardizationRule& rule,
                      std::u32string_view token);

 private:
  std::vector<StandardizationRule> rules_;
  std::vector<std::vector<size_t>> conflicts_;
};

// ---------------------------------------------------------------------------
// Correction table (variant -> canonical, whole tokens only)

class CorrectionTable {
 public:
  CorrectionTable() = default;
  // Chains are resolved to their final target; cycles are rejected with
  // Error(kInvalidArgument).
  explicit CorrectionTable(std::map<std::string, std::string> corrections);

  // TSV: variant, canonical.
  static CorrectionTable Parse(std::istream& in, const std::string& source_name);
  static CorrectionTable Load(const std::string& path);

  // Returns the canonical form, or the token itself.
  const std::string& Lookup(const std::string& token) const;
  const std::map<std::string, std::string>& entries() const { return map_; }
  size_t size() const { return map_.size(); }

 private:
  std::map<std::string, std::string> map_;
};

std::string ApplyCorrectionTable(std::string_view text,
                                 const CorrectionTable& corrections);

}  // namespace ckb

#endif  // CKB_NORMALIZER_H_
