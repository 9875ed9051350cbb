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

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

#include <fmt/format.h>

#include "ckb/error.h"
#include "ckb/text_util.h"

namespace ckb {

namespace {

constexpr char32_t kZwnj = 0x200C;
constexpr char32_t kHeh = 0x0647;
constexpr char32_t kAe = 0x06D5;
constexpr char32_t kTatweel = 0x0640;

bool IsArabicDiacritic(char32_t c) {
  return (c >= 0x064B && c <= 0x065F) || c == 0x0670;
}

// Invisible formatting characters that carry no orthographic content.
bool IsIgnorableFormat(char32_t c) {
  return c == 0x200D || c == 0x200E || c == 0x200F || c == 0xFEFF ||
         c == 0x00AD || c == 0x2060 || (c >= 0x202A && c <= 0x202E) ||
         (c >= 0x2066 && c <= 0x2069);
}

std::u32string Nfkc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorKind::kInvalidArgument, "ICU NFKC unavailable");
  }
  const icu::UnicodeString in = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  const icu::UnicodeString out = nfkc->normalize(in, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorKind::kInvalidEncoding, "NFKC normalization failed");
  }
  std::u32string result;
  result.reserve(out.length());
  for (int32_t i = 0; i < out.length();) {
    const UChar32 c = out.char32At(i);
    result.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return result;
}

std::u32string FoldOnce(std::u32string_view text, const ScriptModel& script,
                        const NormalizerOptions& options) {
  std::u32string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char32_t c = text[i];
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (c == kHeh && options.fold_heh_zwnj && i + 1 < text.size() &&
        text[i + 1] == kZwnj) {
      c = kAe;
      ++i;
    } else if (c == kZwnj) {
      if (options.strip_zwnj) continue;
    } else if (c == kTatweel || IsIgnorableFormat(c)) {
      continue;
    } else if (options.strip_diacritics && IsArabicDiacritic(c)) {
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    const auto& variants = script.Variants();
    if (auto it = variants.find(c); it != variants.end()) {
      out += it->second;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string NormalizeUnicode(std::string_view raw, const ScriptModel& script,
                             const NormalizerOptions& options) {
  if (!IsValidUtf8(raw)) {
    DecodeUtf8(raw);  // throws with the byte offset
  }
  std::u32string text = FoldOnce(Nfkc(raw), script, options);
  // Variant targets are NFKC-stable, but folding can bring a base letter next
  // to a combining mark that NFKC would compose; settle that here.
  for (int round = 0; round < 4; ++round) {
    const std::string utf8 = EncodeUtf8(text);
    std::u32string next = FoldOnce(Nfkc(utf8), script, options);
    if (next == text) break;
    text = std::move(next);
  }
  return EncodeUtf8(text);
}

// ---------------------------------------------------------------------------

std::string_view PauseClassName(PauseClass pause) {
  switch (pause) {
    case PauseClass::kComma: return "comma";
    case PauseClass::kPeriod: return "period";
    case PauseClass::kQuestion: return "question";
    case PauseClass::kExclamation: return "exclamation";
    case PauseClass::kColon: return "colon";
    case PauseClass::kSemicolon: return "semicolon";
    case PauseClass::kQuote: return "quote";
    case PauseClass::kBracket: return "bracket";
    case PauseClass::kDash: return "dash";
    case PauseClass::kOther: return "other";
  }
  return "other";
}

bool IsPunctuation(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }

PauseClass ClassifyPunctuation(char32_t c) {
  switch (c) {
    case U',': case 0x060C: case 0xFE50: case 0x3001:
      return PauseClass::kComma;
    case U'.': case 0x06D4: case 0x2026: case 0x3002:
      return PauseClass::kPeriod;
    case U'?': case 0x061F: case 0x00BF:
      return PauseClass::kQuestion;
    case U'!': case 0x00A1:
      return PauseClass::kExclamation;
    case U':':
      return PauseClass::kColon;
    case U';': case 0x061B:
      return PauseClass::kSemicolon;
    default:
      break;
  }
  const int8_t type = u_charType(static_cast<UChar32>(c));
  switch (type) {
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
      return PauseClass::kQuote;
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
      return PauseClass::kBracket;
    case U_DASH_PUNCTUATION:
      return PauseClass::kDash;
    default:
      break;
  }
  if (c == U'"' || c == U'\'') return PauseClass::kQuote;
  return PauseClass::kOther;
}

TokenStream Tokenize(std::string_view normalized_text) {
  const std::u32string text = DecodeUtf8(normalized_text);
  TokenStream stream;
  std::u32string word;
  bool space_before = false;
  bool word_space_before = false;
  auto flush = [&] {
    if (word.empty()) return;
    stream.items.push_back({false, EncodeUtf8(word), PauseClass::kOther,
                            word_space_before});
    word.clear();
  };
  for (char32_t c : text) {
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      flush();
      space_before = true;
      continue;
    }
    if (IsPunctuation(c)) {
      flush();
      stream.items.push_back(
          {true, EncodeUtf8(c), ClassifyPunctuation(c), space_before});
      space_before = false;
      continue;
    }
    if (word.empty()) {
      word_space_before = space_before;
      space_before = false;
    }
    word.push_back(c);
  }
  flush();
  return stream;
}

std::string TokenStream::Render() const {
  std::string out;
  for (const TokenItem& item : items) {
    if (item.space_before && !out.empty()) out += ' ';
    out += item.text;
  }
  return out;
}

std::vector<std::string> TokenStream::Words() const {
  std::vector<std::string> words;
  for (const TokenItem& item : items) {
    if (!item.is_pause) words.push_back(item.text);
  }
  return words;
}

size_t TokenStream::PauseCount() const {
  return static_cast<size_t>(std::count_if(
      items.begin(), items.end(), [](const TokenItem& i) { return i.is_pause; }));
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::pair<std::string_view, RuleCategory> kRuleCategories[] = {
    {"character-map", RuleCategory::kCharacterMap},
    {"verb-morphology", RuleCategory::kVerbMorphology},
    {"noun-adjective-morphology", RuleCategory::kNounAdjectiveMorphology},
    {"loanword-variant", RuleCategory::kLoanwordVariant},
};

// Character maps form one priority class, everything else the other.
int PriorityClass(RuleCategory category) {
  return category == RuleCategory::kCharacterMap ? 0 : 1;
}

bool SamePattern(const StandardizationRule& a, const StandardizationRule& b) {
  return a.match == b.match && a.anchor_start == b.anchor_start &&
         a.anchor_end == b.anchor_end;
}

}  // namespace

std::string_view RuleCategoryName(RuleCategory category) {
  for (const auto& [name, c] : kRuleCategories) {
    if (c == category) return name;
  }
  return "unknown";
}

std::string StandardizationRule::MatchPattern() const {
  std::string out;
  if (anchor_start) out += '^';
  out += EncodeUtf8(match);
  if (anchor_end) out += '$';
  return out;
}

bool RuleTable::Matches(const StandardizationRule& rule,
                        std::u32string_view token) {
  const size_t m = rule.match.size();
  if (m == 0 || m > token.size()) return false;
  if (rule.anchor_start && rule.anchor_end) return token == rule.match;
  if (rule.anchor_start) return token.substr(0, m) == rule.match;
  if (rule.anchor_end) return token.substr(token.size() - m) == rule.match;
  return token.find(rule.match) != std::u32string_view::npos;
}

std::u32string RuleTable::ApplyRule(const StandardizationRule& rule,
                                    std::u32string_view token) {
  if (!Matches(rule, token)) return std::u32string(token);
  const size_t m = rule.match.size();
  if (rule.anchor_start && rule.anchor_end) return rule.replacement;
  if (rule.anchor_start) {
    return rule.replacement + std::u32string(token.substr(m));
  }
  if (rule.anchor_end) {
    return std::u32string(token.substr(0, token.size() - m)) + rule.replacement;
  }
  std::u32string out;
  size_t pos = 0;
  while (true) {
    const size_t hit = token.find(rule.match, pos);
    if (hit == std::u32string_view::npos) break;
    out.append(token.substr(pos, hit - pos));
    out += rule.replacement;
    pos = hit + m;
  }
  out.append(token.substr(pos));
  return out;
}

RuleTable::RuleTable(std::vector<StandardizationRule> rules)
    : rules_(std::move(rules)) {
  std::set<std::string> ids;
  for (const StandardizationRule& r : rules_) {
    if (!ids.insert(r.id).second) {
      throw Error(ErrorKind::kInvalidRule, "duplicate rule id " + r.id);
    }
    if (r.match.empty()) {
      throw Error(ErrorKind::kInvalidRule, r.id + ": empty match");
    }
    if (r.match == r.replacement) {
      throw Error(ErrorKind::kInvalidRule,
                  r.id + ": match equals replacement");
    }
    // The rule must leave its own output alone. Probe with the smallest
    // token it fires on, padded on unanchored sides.
    std::u32string probe = r.match;
    if (!r.anchor_start) probe = U"ب" + probe;
    if (!r.anchor_end) probe += U"ب";
    const std::u32string once = ApplyRule(r, probe);
    if (ApplyRule(r, once) != once) {
      throw Error(ErrorKind::kInvalidRule,
                  fmt::format("{}: '{}' -> '{}' re-fires on its own output",
                              r.id, r.MatchPattern(),
                              EncodeUtf8(r.replacement)));
    }
  }
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const StandardizationRule& a,
                      const StandardizationRule& b) {
                     const int pa = PriorityClass(a.category);
                     const int pb = PriorityClass(b.category);
                     if (pa != pb) return pa < pb;
                     if (pa == 1 && a.match.size() != b.match.size()) {
                       return a.match.size() > b.match.size();
                     }
                     return a.id < b.id;
                   });
  conflicts_.assign(rules_.size(), {});
  for (size_t i = 0; i < rules_.size(); ++i) {
    for (size_t j = 0; j < rules_.size(); ++j) {
      if (i == j) continue;
      const auto& a = rules_[i];
      const auto& b = rules_[j];
      if (PriorityClass(a.category) == PriorityClass(b.category) &&
          SamePattern(a, b) && a.replacement != b.replacement) {
        conflicts_[i].push_back(j);
      }
    }
  }
}

RuleTable RuleTable::Parse(std::istream& in, const std::string& source_name) {
  std::vector<StandardizationRule> rules;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    const auto f = SplitTabs(line);
    auto bad = [&](const std::string& what) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: {}", source_name, line_no, what));
    };
    if (f.size() != 5) bad("expected 5 tab-separated fields");
    StandardizationRule r;
    r.id = f[0];
    bool known = false;
    for (const auto& [name, c] : kRuleCategories) {
      if (name == f[1]) {
        r.category = c;
        known = true;
      }
    }
    if (!known) bad("unknown rule category " + f[1]);
    std::string_view pattern = f[2];
    if (!pattern.empty() && pattern.front() == '^') {
      r.anchor_start = true;
      pattern.remove_prefix(1);
    }
    if (!pattern.empty() && pattern.back() == '$') {
      r.anchor_end = true;
      pattern.remove_suffix(1);
    }
    try {
      r.match = DecodeUtf8(pattern);
      r.replacement = DecodeUtf8(f[3]);
    } catch (const Error& e) {
      bad(e.what());
    }
    r.source = f[4];
    rules.push_back(std::move(r));
  }
  try {
    return RuleTable(std::move(rules));
  } catch (const Error& e) {
    throw Error(e.kind(), source_name + ": " + e.what());
  }
}

RuleTable RuleTable::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open rule table " + path);
  return Parse(in, path);
}

std::string RuleTable::Standardize(std::string_view token) const {
  std::u32string current = DecodeUtf8(token);
  for (int round = 0; round < kMaxRounds; ++round) {
    const std::u32string before = current;
    for (size_t i = 0; i < rules_.size(); ++i) {
      const StandardizationRule& rule = rules_[i];
      if (!Matches(rule, current)) continue;
      for (size_t j : conflicts_[i]) {
        if (Matches(rules_[j], current)) {
          throw Error(
              ErrorKind::kRuleConflict,
              fmt::format("rules {} and {} both rewrite '{}' in '{}'", rule.id,
                          rules_[j].id, rule.MatchPattern(),
                          EncodeUtf8(current)));
        }
      }
      current = ApplyRule(rule, current);
    }
    if (current == before) return EncodeUtf8(current);
  }
  throw Error(ErrorKind::kFixedPointCap,
              fmt::format("no fixed point for '{}' within {} rounds", token,
                          kMaxRounds));
}

// ---------------------------------------------------------------------------

CorrectionTable::CorrectionTable(std::map<std::string, std::string> corrections) {
  for (auto it = corrections.begin(); it != corrections.end();) {
    if (it->first == it->second) {
      it = corrections.erase(it);
    } else {
      ++it;
    }
  }
  for (const auto& [variant, target] : corrections) {
    std::string resolved = target;
    std::set<std::string> seen{variant};
    while (true) {
      auto next = corrections.find(resolved);
      if (next == corrections.end()) break;
      if (!seen.insert(resolved).second) {
        throw Error(ErrorKind::kInvalidArgument,
                    "correction cycle through '" + variant + "'");
      }
      resolved = next->second;
    }
    if (resolved == variant) {
      throw Error(ErrorKind::kInvalidArgument,
                  "correction cycle through '" + variant + "'");
    }
    map_[variant] = resolved;
  }
}

CorrectionTable CorrectionTable::Parse(std::istream& in,
                                       const std::string& source_name) {
  std::map<std::string, std::string> entries;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    const auto f = SplitTabs(line);
    if (f.size() != 2 || f[0].empty() || f[1].empty()) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: expected variant<TAB>canonical",
                              source_name, line_no));
    }
    auto [it, inserted] = entries.emplace(f[0], f[1]);
    if (!inserted && it->second != f[1]) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: '{}' already maps to '{}'", source_name,
                              line_no, f[0], it->second));
    }
  }
  return CorrectionTable(std::move(entries));
}

CorrectionTable CorrectionTable::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open correction table " + path);
  return Parse(in, path);
}

const std::string& CorrectionTable::Lookup(const std::string& token) const {
  auto it = map_.find(token);
  return it == map_.end() ? token : it->second;
}

std::string ApplyCorrectionTable(std::string_view text,
                                 const CorrectionTable& corrections) {
  if (corrections.size() == 0) return std::string(text);
  TokenStream stream = Tokenize(text);
  for (TokenItem& item : stream.items) {
    if (!item.is_pause) item.text = corrections.Lookup(item.text);
  }
  return stream.Render();
}

}  // namespace ckb
