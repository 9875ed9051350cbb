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

#include "ckb/lexicon_builder.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

#include <fmt/format.h>

#include "ckb/error.h"
#include "ckb/text_util.h"

namespace ckb {

std::vector<TokenFrequency> ExtractFrequentTokens(
    const std::vector<TokenFrequency>& table, size_t k, bool* short_vocabulary) {
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "k must be at least 1");
  std::vector<TokenFrequency> sorted = table;
  SortByFrequency(sorted);
  if (short_vocabulary != nullptr) *short_vocabulary = k > sorted.size();
  if (sorted.size() > k) sorted.resize(k);
  return sorted;
}

VariantGroups ParseVariantGroups(std::istream& in,
                                 const std::string& source_name) {
  VariantGroups groups;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    const auto f = SplitTabs(line);
    if (f.size() != 2 || f[0].empty() || f[1].empty()) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: expected group_id<TAB>surface",
                              source_name, line_no));
    }
    auto& members = groups[f[0]];
    if (std::find(members.begin(), members.end(), f[1]) == members.end()) {
      members.push_back(f[1]);
    }
  }
  return groups;
}

VariantGroups LoadVariantGroups(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  return ParseVariantGroups(in, path);
}

std::vector<LexiconEntry> CanonicalizeVariants(std::vector<LexiconEntry> entries,
                                               const VariantGroups& groups) {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < entries.size(); ++i) index[entries[i].surface] = i;
  std::set<std::string> grouped;
  for (const auto& [group, members] : groups) {
    if (members.empty()) {
      throw Error(ErrorKind::kEmptyGroup, "variant group " + group + " is empty");
    }
    std::vector<size_t> idx;
    for (const std::string& m : members) {
      auto it = index.find(m);
      if (it == index.end()) {
        throw Error(ErrorKind::kInvalidArgument,
                    fmt::format("variant group {} names unknown surface {}",
                                group, m));
      }
      if (!grouped.insert(m).second) {
        throw Error(ErrorKind::kInvalidArgument,
                    fmt::format("surface {} belongs to more than one group", m));
      }
      idx.push_back(it->second);
    }
    size_t best = idx.front();
    for (size_t i : idx) {
      const LexiconEntry& e = entries[i];
      const LexiconEntry& b = entries[best];
      if (e.frequency > b.frequency ||
          (e.frequency == b.frequency && e.surface < b.surface)) {
        best = i;
      }
    }
    std::vector<PhoneSeq> prons = entries[best].pronunciations;
    for (size_t i : idx) {
      LexiconEntry& e = entries[i];
      e.variant_group = group;
      e.canonical = i == best;
      for (const PhoneSeq& p : e.pronunciations) {
        if (std::find(prons.begin(), prons.end(), p) == prons.end()) {
          prons.push_back(p);
        }
      }
    }
    entries[best].pronunciations = std::move(prons);
  }
  return entries;
}

std::vector<LexiconOverride> ParseOverrides(std::istream& in,
                                            const std::string& source_name,
                                            const ScriptModel& script) {
  std::vector<LexiconOverride> out;
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
    if (f.size() < 2 || f.size() > 3 || f[0].empty()) {
      bad("expected surface<TAB>action[<TAB>phones]");
    }
    LexiconOverride o;
    o.surface = f[0];
    if (f[1] == "keep") {
      o.action = OverrideAction::kKeep;
    } else if (f[1] == "drop") {
      o.action = OverrideAction::kDrop;
    } else if (f[1] == "replace") {
      o.action = OverrideAction::kReplace;
    } else {
      bad("unknown action " + f[1]);
    }
    if (f.size() == 3 && !TrimAscii(f[2]).empty()) {
      try {
        o.pronunciation = ParsePhones(f[2], script);
      } catch (const Error& e) {
        bad(e.what());
      }
    }
    if (o.action == OverrideAction::kReplace && !o.pronunciation) {
      bad("replace needs a pronunciation");
    }
    if (o.action == OverrideAction::kDrop && o.pronunciation) {
      bad("drop takes no pronunciation");
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<LexiconOverride> LoadOverrides(const std::string& path,
                                           const ScriptModel& script) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  return ParseOverrides(in, path, script);
}

LexiconBuildResult BuildLexicon(const std::vector<TokenFrequency>& tokens,
                                const LexiconInputs& inputs) {
  if (inputs.g2p == nullptr) {
    throw Error(ErrorKind::kInvalidArgument, "lexicon build needs a G2P");
  }
  LexiconBuildResult result;
  auto standard = [&](const std::string& token) {
    std::string s =
        inputs.corrections ? inputs.corrections->Lookup(token) : token;
    return inputs.rules ? inputs.rules->Standardize(s) : s;
  };

  std::map<std::string, uint64_t> merged;
  std::map<std::string, std::string> spelling;  // input token -> standard
  for (const TokenFrequency& t : tokens) {
    if (t.token.empty()) continue;
    std::string s;
    try {
      s = standard(t.token);
    } catch (const Error& e) {
      result.rejects.push_back({t.token, t.frequency, e.what()});
      continue;
    }
    merged[s] += t.frequency;
    spelling[t.token] = s;
  }

  std::map<std::string, LexiconEntry> entries;
  std::map<std::string, LexiconReject> failed;
  for (const auto& [surface, freq] : merged) {
    try {
      PhoneSeq phones = inputs.g2p->Convert(surface);
      entries[surface] = LexiconEntry{surface, {std::move(phones)}, freq, {}, true};
    } catch (const Error& e) {
      failed[surface] = {surface, freq, e.what()};
    }
  }

  if (inputs.overrides != nullptr) {
    for (const LexiconOverride& o : *inputs.overrides) {
      std::string s;
      try {
        s = standard(o.surface);
      } catch (const Error& e) {
        result.warnings.push_back(
            fmt::format("override {}: {}", o.surface, e.what()));
        continue;
      }
      auto entry = entries.find(s);
      auto fail = failed.find(s);
      if (entry == entries.end() && fail == failed.end()) {
        result.warnings.push_back(
            fmt::format("override {}: surface not in the token list", s));
        continue;
      }
      switch (o.action) {
        case OverrideAction::kDrop:
          if (entry != entries.end()) entries.erase(entry);
          if (fail != failed.end()) failed.erase(fail);
          break;
        case OverrideAction::kReplace:
        case OverrideAction::kKeep:
          if (entry != entries.end()) {
            if (o.action == OverrideAction::kReplace) {
              entry->second.pronunciations = {*o.pronunciation};
            }
          } else if (o.pronunciation) {
            entries[s] =
                LexiconEntry{s, {*o.pronunciation}, fail->second.frequency, {}, true};
            failed.erase(fail);
          } else {
            result.warnings.push_back(fmt::format(
                "override {}: keep without pronunciation on a G2P failure", s));
          }
          break;
      }
    }
  }

  VariantGroups groups;
  if (inputs.variant_groups != nullptr) {
    std::set<std::string> assigned;
    for (const auto& [group, members] : *inputs.variant_groups) {
      std::vector<std::string> present;
      for (const std::string& m : members) {
        std::string s;
        try {
          s = standard(m);
        } catch (const Error& e) {
          result.warnings.push_back(
              fmt::format("group {} member {}: {}", group, m, e.what()));
          continue;
        }
        if (!entries.count(s)) continue;
        if (std::find(present.begin(), present.end(), s) != present.end()) {
          continue;
        }
        if (!assigned.insert(s).second) {
          result.warnings.push_back(fmt::format(
              "group {} member {} already grouped elsewhere", group, s));
          continue;
        }
        present.push_back(s);
      }
      if (present.empty()) {
        result.warnings.push_back(
            fmt::format("group {} has no members in lexicon", group));
        continue;
      }
      groups[group] = std::move(present);
    }
  }

  std::vector<LexiconEntry> list;
  list.reserve(entries.size());
  for (auto& [surface, e] : entries) list.push_back(std::move(e));
  result.entries = CanonicalizeVariants(std::move(list), groups);

  std::map<std::string, std::string> canonical_of;
  std::map<std::string, std::string> group_canonical;
  for (const LexiconEntry& e : result.entries) {
    if (e.variant_group && e.canonical) group_canonical[*e.variant_group] = e.surface;
  }
  for (const LexiconEntry& e : result.entries) {
    canonical_of[e.surface] =
        e.variant_group ? group_canonical[*e.variant_group] : e.surface;
  }
  for (const auto& [token, s] : spelling) {
    auto it = canonical_of.find(s);
    if (it != canonical_of.end() && it->second != token) {
      result.corrections[token] = it->second;
    }
  }
  for (auto& [surface, r] : failed) result.rejects.push_back(std::move(r));
  std::sort(result.rejects.begin(), result.rejects.end(),
            [](const LexiconReject& a, const LexiconReject& b) {
              return a.surface < b.surface;
            });
  return result;
}

namespace {

PhoneSeq MergeIx(PhoneSeq phones) {
  for (std::string& p : phones) {
    if (p == "ix") p = "i";
  }
  return phones;
}

}  // namespace

PronunciationLexicon ToPronunciationLexicon(
    const std::vector<LexiconEntry>& entries, bool merge_ix) {
  PronunciationLexicon lex;
  for (const LexiconEntry& e : entries) {
    if (!e.canonical) continue;
    auto& prons = lex[e.surface];
    for (const PhoneSeq& p : e.pronunciations) {
      PhoneSeq q = merge_ix ? MergeIx(p) : p;
      if (std::find(prons.begin(), prons.end(), q) == prons.end()) {
        prons.push_back(std::move(q));
      }
    }
  }
  return lex;
}

std::string FormatLexicon(const std::vector<LexiconEntry>& entries,
                          bool merge_ix) {
  std::string out;
  for (const auto& [surface, prons] : ToPronunciationLexicon(entries, merge_ix)) {
    for (const PhoneSeq& p : prons) {
      out += surface;
      out += '\t';
      out += FormatPhones(p);
      out += '\n';
    }
  }
  return out;
}

void EmitLexicon(const std::vector<LexiconEntry>& entries,
                 const std::string& path, bool merge_ix) {
  WriteFile(path, FormatLexicon(entries, merge_ix));
}

PronunciationLexicon ParseLexicon(std::istream& in,
                                  const std::string& source_name,
                                  const ScriptModel& script) {
  PronunciationLexicon lex;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = SplitTabs(line);
    if (f.size() != 2 || f[0].empty()) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: expected surface<TAB>phones", source_name,
                              line_no));
    }
    PhoneSeq phones;
    try {
      phones = ParsePhones(f[1], script);
    } catch (const Error& e) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: {}", source_name, line_no, e.what()));
    }
    if (phones.empty()) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: empty pronunciation", source_name, line_no));
    }
    lex[f[0]].push_back(std::move(phones));
  }
  return lex;
}

PronunciationLexicon LoadLexicon(const std::string& path,
                                 const ScriptModel& script) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  return ParseLexicon(in, path, script);
}

std::string FormatRejects(const std::vector<LexiconReject>& rejects) {
  std::string out = "surface\tfrequency\treason\n";
  for (const LexiconReject& r : rejects) {
    out += fmt::format("{}\t{}\t{}\n", r.surface, r.frequency, r.reason);
  }
  return out;
}

}  // namespace ckb
