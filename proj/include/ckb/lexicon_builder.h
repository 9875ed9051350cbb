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

// Pronunciation lexicon construction: frequent-token selection, script
// standardization, variant canonicalization, G2P and lexicon file I/O.

#ifndef CKB_LEXICON_BUILDER_H_
#define CKB_LEXICON_BUILDER_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckb/g2p.h"
#include "ckb/normalizer.h"
#include "ckb/token_frequency.h"

namespace ckb {

struct LexiconEntry {
  std::string surface;
  std::vector<PhoneSeq> pronunciations;
  uint64_t frequency = 0;
  std::optional<std::string> variant_group;
  bool canonical = true;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// Top k by frequency, ties by token. A k beyond the vocabulary returns the
// whole table and sets *short_vocabulary. Throws Error(kInvalidArgument) for k == 0.
std::vector<TokenFrequency> ExtractFrequentTokens(
    const std::vector<TokenFrequency>& table, size_t k,
    bool* short_vocabulary = nullptr);

// group id -> member surfaces.
using VariantGroups = std::map<std::string, std::vector<std::string>>;

// `group_id<TAB>surface` lines.
VariantGroups ParseVariantGroups(std::istream& in, const std::string& source_name);
VariantGroups LoadVariantGroups(const std::string& path);

// Marks the maximum-frequency member of each group canonical (ties by
// surface) and attaches every member's pronunciations to it. Entries keep
// their order. Throws Error(kEmptyGroup) or Error(kInvalidArgument) for a
// member that is not an entry.
std::vector<LexiconEntry> CanonicalizeVariants(std::vector<LexiconEntry> entries,
                                               const VariantGroups& groups);

enum class OverrideAction { kKeep, kDrop, kReplace };

// keep: force an entry, with the given pronunciation if the automatic one
// failed. drop: remove the surface. replace: use only the given
// pronunciation.
struct LexiconOverride {
  std::string surface;
  OverrideAction action = OverrideAction::kKeep;
  std::optional<PhoneSeq> pronunciation;
};

// `surface<TAB>keep|drop|replace[<TAB>phones]` lines.
std::vector<LexiconOverride> ParseOverrides(std::istream& in,
                                            const std::string& source_name,
                                            const ScriptModel& script);
std::vector<LexiconOverride> LoadOverrides(const std::string& path,
                                           const ScriptModel& script);

struct LexiconReject {
  std::string surface;
  uint64_t frequency = 0;
  std::string reason;
};

struct LexiconBuildResult {
  std::vector<LexiconEntry> entries;  // sorted by surface
  std::vector<LexiconReject> rejects;
  // Input spelling -> lexicon surface, for every token that changed.
  std::map<std::string, std::string> corrections;
  std::vector<std::string> warnings;
};

struct LexiconInputs {
  const RuleTable* rules = nullptr;
  const CorrectionTable* corrections = nullptr;
  const G2p* g2p = nullptr;
  const VariantGroups* variant_groups = nullptr;
  const std::vector<LexiconOverride>* overrides = nullptr;
};

// corrections -> standardize -> merge -> g2p -> overrides -> canonicalize.
// Group members and override surfaces are standardized the same way.
LexiconBuildResult BuildLexicon(const std::vector<TokenFrequency>& tokens,
                                const LexiconInputs& inputs);

// One `surface<TAB>phones` line per distinct (surface, pronunciation) of the
// canonical entries, sorted. With merge_ix the unwritten short vowel is
// written as i.
std::string FormatLexicon(const std::vector<LexiconEntry>& entries,
                          bool merge_ix = false);
void EmitLexicon(const std::vector<LexiconEntry>& entries,
                 const std::string& path, bool merge_ix = false);

// Inverse of FormatLexicon: surface -> pronunciations in file order.
using PronunciationLexicon = std::map<std::string, std::vector<PhoneSeq>>;
PronunciationLexicon ParseLexicon(std::istream& in,
                                  const std::string& source_name,
                                  const ScriptModel& script);
PronunciationLexicon LoadLexicon(const std::string& path,
                                 const ScriptModel& script);
PronunciationLexicon ToPronunciationLexicon(
    const std::vector<LexiconEntry>& entries, bool merge_ix = false);

std::string FormatRejects(const std::vector<LexiconReject>& rejects);

}  // namespace ckb

#endif  // CKB_LEXICON_BUILDER_H_
