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

#include "ckb/g2p.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "ckb/error.h"
#include "ckb/text_util.h"

namespace ckb {

namespace {

constexpr std::string_view kEpentheticVowel = "ix";

constexpr std::array<std::string_view, kNumConstraints> kConstraintNames = {
    "unsyllabifiable-residue", "complex-onset", "hiatus",
    "coda-sonority-violation", "epenthesis",    "digraph-split",
};

size_t SaturatingMul(size_t a, size_t b) {
  if (a != 0 && b > std::numeric_limits<size_t>::max() / a) {
    return std::numeric_limits<size_t>::max();
  }
  return a * b;
}

size_t SaturatingAdd(size_t a, size_t b) {
  return a > std::numeric_limits<size_t>::max() - b
             ? std::numeric_limits<size_t>::max()
             : a + b;
}

// Counts one consonant run that sits between two nuclei (or at an edge) and
// distributes it into coda and onset.
struct RunSplit {
  size_t coda = 0;
  size_t onset = 0;
  int residue = 0;
};

RunSplit SplitMedial(size_t k) {
  RunSplit s;
  s.onset = std::min<size_t>(k, 1);
  s.coda = std::min<size_t>(k - s.onset, 2);
  size_t rest = k - s.onset - s.coda;
  if (rest > 0) {
    ++s.onset;
    --rest;
  }
  s.residue = static_cast<int>(rest);
  return s;
}

}  // namespace

std::string FormatPhones(const PhoneSeq& phones) { return Join(phones, " "); }

PhoneSeq ParsePhones(std::string_view text, const ScriptModel& script) {
  PhoneSeq phones = SplitSpaces(text);
  for (const std::string& p : phones) script.PhonemeIndex(p);
  return phones;
}

std::string_view ConstraintName(Constraint c) {
  return kConstraintNames[static_cast<size_t>(c)];
}

ConstraintSet ConstraintSet::Default() {
  ConstraintSet set;
  set.weights_ = {1000, 10, 8, 4, 1, 2};
  return set;
}

void ConstraintSet::Set(Constraint c, double weight) {
  if (!(weight > 0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("constraint {} needs a positive weight, got {}",
                            ConstraintName(c), weight));
  }
  weights_[static_cast<size_t>(c)] = weight;
}

void ConstraintSet::Validate() const {
  double others = 0;
  for (size_t i = 0; i < kNumConstraints; ++i) {
    if (!(weights_[i] > 0)) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("constraint {} has non-positive weight",
                              kConstraintNames[i]));
    }
    if (i != static_cast<size_t>(Constraint::kResidue)) others += weights_[i];
  }
  if (weight(Constraint::kResidue) <= others) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("residue weight {} must exceed the sum of all "
                            "other weights ({})",
                            weight(Constraint::kResidue), others));
  }
}

ConstraintSet ConstraintSet::Parse(std::istream& in,
                                   const std::string& source_name) {
  ConstraintSet set = Default();
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
    if (f.size() != 2) bad("expected name<TAB>weight");
    auto it = std::find(kConstraintNames.begin(), kConstraintNames.end(), f[0]);
    if (it == kConstraintNames.end()) bad("unknown constraint " + f[0]);
    char* end = nullptr;
    const double w = std::strtod(f[1].c_str(), &end);
    if (end == f[1].c_str() || *end != '\0') bad("bad weight " + f[1]);
    try {
      set.Set(static_cast<Constraint>(it - kConstraintNames.begin()), w);
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  try {
    set.Validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kMalformedFile, source_name + ": " + e.what());
  }
  return set;
}

ConstraintSet ConstraintSet::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open constraint file " + path);
  return Parse(in, path);
}

// ---------------------------------------------------------------------------

SyllableParse ParseSyllables(const PhoneSeq& phones,
                             const ScriptModel& script) {
  SyllableParse parse;
  std::vector<size_t> nuclei;
  for (size_t i = 0; i < phones.size(); ++i) {
    if (script.IsVowel(phones[i])) nuclei.push_back(i);
  }
  if (nuclei.empty()) {
    parse.residue = static_cast<int>(phones.size());
    return parse;
  }
  parse.syllables.resize(nuclei.size());
  for (size_t s = 0; s < nuclei.size(); ++s) {
    parse.syllables[s].nucleus = phones[nuclei[s]];
  }

  // Initial run: up to two consonants of onset, the rest is residue.
  const size_t k0 = nuclei.front();
  const size_t onset0 = std::min<size_t>(k0, 2);
  parse.residue += static_cast<int>(k0 - onset0);
  parse.syllables.front().onset.assign(phones.begin() + (k0 - onset0),
                                       phones.begin() + k0);

  for (size_t s = 0; s + 1 < nuclei.size(); ++s) {
    const size_t first = nuclei[s] + 1;
    const size_t k = nuclei[s + 1] - first;
    const RunSplit split = SplitMedial(k);
    parse.syllables[s].coda.assign(phones.begin() + first,
                                   phones.begin() + first + split.coda);
    parse.syllables[s + 1].onset.assign(
        phones.begin() + nuclei[s + 1] - split.onset,
        phones.begin() + nuclei[s + 1]);
    parse.residue += split.residue;
  }

  // Final run: up to two consonants of coda.
  const size_t last = nuclei.back() + 1;
  const size_t kf = phones.size() - last;
  const size_t coda = std::min<size_t>(kf, 2);
  parse.syllables.back().coda.assign(phones.begin() + last,
                                     phones.begin() + last + coda);
  parse.residue += static_cast<int>(kf - coda);
  return parse;
}

std::optional<std::vector<Syllable>> Syllabify(const PhoneSeq& phones,
                                               const ScriptModel& script) {
  SyllableParse parse = ParseSyllables(phones, script);
  if (!parse.ok()) return std::nullopt;
  return std::move(parse.syllables);
}

int PronunciationCandidate::EpenthesisCount() const {
  return static_cast<int>(std::count_if(
      provenance.begin(), provenance.end(),
      [](const PhoneOrigin& o) { return o.source == PhoneSource::kEpenthesis; }));
}

int PronunciationCandidate::DigraphSplitCount() const {
  // Both halves of a split digraph carry kDigraphSplit; count units.
  int count = 0;
  int last_unit = -2;
  for (const PhoneOrigin& o : provenance) {
    if (o.source == PhoneSource::kDigraphSplit && o.unit != last_unit) {
      ++count;
      last_unit = o.unit;
    }
  }
  return count;
}

void ScoreCandidate(PronunciationCandidate& c, const ScriptModel& script,
                    const ConstraintSet& constraints) {
  c.parse = ParseSyllables(c.phones, script);
  Violations v{};
  v[static_cast<size_t>(Constraint::kResidue)] = c.parse.residue;
  for (const Syllable& syl : c.parse.syllables) {
    if (syl.onset.size() >= 2) {
      ++v[static_cast<size_t>(Constraint::kComplexOnset)];
    }
    if (syl.onset.empty()) ++v[static_cast<size_t>(Constraint::kHiatus)];
    if (syl.coda.size() == 2 &&
        script.Sonority(syl.coda[0]) <= script.Sonority(syl.coda[1])) {
      ++v[static_cast<size_t>(Constraint::kCodaSonority)];
    }
  }
  v[static_cast<size_t>(Constraint::kEpenthesis)] = c.EpenthesisCount();
  v[static_cast<size_t>(Constraint::kDigraphSplit)] = c.DigraphSplitCount();
  c.violations = v;
  c.penalty = Score(c, constraints);
}

double Score(const PronunciationCandidate& c, const ConstraintSet& constraints) {
  double penalty = 0;
  for (size_t i = 0; i < kNumConstraints; ++i) {
    penalty += constraints.weight(static_cast<Constraint>(i)) * c.violations[i];
  }
  return penalty;
}

bool BetterCandidate(const PronunciationCandidate& a,
                     const PronunciationCandidate& b) {
  if (a.penalty != b.penalty) return a.penalty < b.penalty;
  const int ea = a.EpenthesisCount();
  const int eb = b.EpenthesisCount();
  if (ea != eb) return ea < eb;
  return a.phones < b.phones;
}

// ---------------------------------------------------------------------------

G2p::G2p(const ScriptModel& script, ConstraintSet constraints,
         G2pOptions options)
    : script_(&script), constraints_(constraints), options_(options) {
  constraints_.Validate();
  if (options_.beam == 0 || options_.candidate_cap == 0) {
    throw Error(ErrorKind::kInvalidArgument, "beam and cap must be positive");
  }
}

std::vector<std::vector<G2p::Option>> G2p::UnitOptions(
    const std::vector<GraphemeUnit>& units) const {
  std::vector<std::vector<Option>> options;
  options.reserve(units.size());
  for (const GraphemeUnit& unit : units) {
    const Grapheme& g = *unit.grapheme;
    std::vector<Option> opts;
    if (g.is_digraph()) {
      for (const std::string& p : g.candidate_phonemes) {
        opts.push_back({{p}, PhoneSource::kDigraphMerged});
      }
      // The two-singleton split keeps one consonantal and one vocalic half.
      const auto& single = script_->GraphemeCandidates(g.codepoints.substr(0, 1));
      std::vector<std::string> glides, vowels;
      for (const std::string& p : single) {
        (script_->IsVowel(p) ? vowels : glides).push_back(p);
      }
      for (const std::string& c : glides) {
        for (const std::string& v : vowels) {
          opts.push_back({{c, v}, PhoneSource::kDigraphSplit});
        }
      }
      for (const std::string& v : vowels) {
        for (const std::string& c : glides) {
          opts.push_back({{v, c}, PhoneSource::kDigraphSplit});
        }
      }
    } else {
      const PhoneSource source = g.candidate_phonemes.size() > 1
                                     ? PhoneSource::kReading
                                     : PhoneSource::kFixed;
      for (const std::string& p : g.candidate_phonemes) {
        opts.push_back({{p}, source});
      }
    }
    options.push_back(std::move(opts));
  }
  return options;
}

size_t G2p::ExpansionSize(std::string_view token) const {
  const auto units = script_->Segment(DecodeUtf8(token));
  const auto options = UnitOptions(units);
  // States: nothing yet, last phone vowel, last phone consonant.
  std::array<size_t, 3> count{1, 0, 0};
  for (const auto& opts : options) {
    std::array<size_t, 3> next{0, 0, 0};
    for (const Option& opt : opts) {
      size_t internal = 1;
      for (size_t i = 1; i < opt.phones.size(); ++i) {
        if (!script_->IsVowel(opt.phones[i - 1]) &&
            !script_->IsVowel(opt.phones[i])) {
          internal = SaturatingMul(internal, 2);
        }
      }
      const bool first_c = !script_->IsVowel(opt.phones.front());
      const size_t last_state = script_->IsVowel(opt.phones.back()) ? 1 : 2;
      for (size_t s = 0; s < 3; ++s) {
        if (count[s] == 0) continue;
        const size_t joins = (s == 2 && first_c) ? 2 : 1;
        next[last_state] = SaturatingAdd(
            next[last_state],
            SaturatingMul(SaturatingMul(count[s], internal), joins));
      }
    }
    count = next;
  }
  return SaturatingAdd(SaturatingAdd(count[0], count[1]), count[2]);
}

double G2p::PartialPenalty(const PronunciationCandidate& prefix) const {
  // Syllables before the trailing consonant run are final; the trailing run
  // can still become coda plus onset, so only its certain overflow counts.
  const PhoneSeq& phones = prefix.phones;
  size_t end = phones.size();
  while (end > 0 && !script_->IsVowel(phones[end - 1])) --end;
  const size_t trailing = phones.size() - end;
  double penalty = 0;
  if (end == 0) {
    if (trailing > 2) {
      penalty += constraints_.weight(Constraint::kResidue) * (trailing - 2);
    }
  } else {
    PronunciationCandidate closed;
    closed.phones.assign(phones.begin(), phones.begin() + end);
    closed.provenance.assign(prefix.provenance.begin(),
                             prefix.provenance.begin() + end);
    ScoreCandidate(closed, *script_, constraints_);
    penalty = closed.penalty;
    if (trailing > 4) {
      penalty += constraints_.weight(Constraint::kResidue) * (trailing - 4);
    }
  }
  for (size_t i = end; i < phones.size(); ++i) {
    if (prefix.provenance[i].source == PhoneSource::kEpenthesis) {
      penalty += constraints_.weight(Constraint::kEpenthesis);
    }
  }
  return penalty;
}

CandidateSet G2p::GenerateCandidates(std::string_view token) const {
  const std::u32string word = DecodeUtf8(token);
  const auto units = script_->Segment(word);
  const auto options = UnitOptions(units);
  const bool beam_mode = ExpansionSize(token) > options_.candidate_cap;

  std::vector<PronunciationCandidate> partial(1);
  for (size_t u = 0; u < options.size(); ++u) {
    std::vector<PronunciationCandidate> next;
    for (const PronunciationCandidate& base : partial) {
      for (const Option& opt : options[u]) {
        // Expand this option phone by phone, branching on ix insertion at
        // every consonant-consonant boundary.
        std::vector<PronunciationCandidate> grown{base};
        for (const std::string& phone : opt.phones) {
          const bool consonant = !script_->IsVowel(phone);
          std::vector<PronunciationCandidate> step;
          step.reserve(grown.size() * 2);
          for (PronunciationCandidate& g : grown) {
            const bool cc = consonant && !g.phones.empty() &&
                            !script_->IsVowel(g.phones.back());
            if (cc) {
              PronunciationCandidate with_ix = g;
              with_ix.phones.emplace_back(kEpentheticVowel);
              with_ix.provenance.push_back({PhoneSource::kEpenthesis, -1});
              with_ix.phones.push_back(phone);
              with_ix.provenance.push_back({opt.source, static_cast<int>(u)});
              g.phones.push_back(phone);
              g.provenance.push_back({opt.source, static_cast<int>(u)});
              step.push_back(std::move(g));
              step.push_back(std::move(with_ix));
            } else {
              g.phones.push_back(phone);
              g.provenance.push_back({opt.source, static_cast<int>(u)});
              step.push_back(std::move(g));
            }
          }
          grown = std::move(step);
        }
        for (auto& g : grown) next.push_back(std::move(g));
      }
    }
    if (beam_mode && next.size() > options_.beam) {
      std::vector<std::pair<double, size_t>> keyed;
      keyed.reserve(next.size());
      for (size_t i = 0; i < next.size(); ++i) {
        keyed.emplace_back(PartialPenalty(next[i]), i);
      }
      std::sort(keyed.begin(), keyed.end(),
                [&](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  const int ea = next[a.second].EpenthesisCount();
                  const int eb = next[b.second].EpenthesisCount();
                  if (ea != eb) return ea < eb;
                  if (next[a.second].phones != next[b.second].phones) {
                    return next[a.second].phones < next[b.second].phones;
                  }
                  return a.second < b.second;
                });
      keyed.resize(options_.beam);
      std::sort(keyed.begin(), keyed.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
      std::vector<PronunciationCandidate> kept;
      kept.reserve(keyed.size());
      for (const auto& [pen, idx] : keyed) kept.push_back(std::move(next[idx]));
      next = std::move(kept);
    }
    partial = std::move(next);
  }

  CandidateSet result;
  result.cap_hit = beam_mode;
  if (units.empty()) return result;
  // De-duplicate by phone sequence, keeping the cheapest derivation at the
  // position of the first occurrence.
  std::map<PhoneSeq, size_t> seen;
  for (PronunciationCandidate& c : partial) {
    ScoreCandidate(c, *script_, constraints_);
    auto [it, inserted] = seen.emplace(c.phones, result.candidates.size());
    if (inserted) {
      result.candidates.push_back(std::move(c));
    } else if (BetterCandidate(c, result.candidates[it->second])) {
      result.candidates[it->second] = std::move(c);
    }
  }
  return result;
}

PronunciationCandidate G2p::Best(std::string_view token) const {
  if (token.empty()) {
    throw Error(ErrorKind::kNoCandidate, "empty token");
  }
  CandidateSet set = GenerateCandidates(token);
  if (set.candidates.empty()) {
    throw Error(ErrorKind::kNoCandidate,
                fmt::format("no pronunciation candidate for '{}'", token));
  }
  auto best = std::min_element(set.candidates.begin(), set.candidates.end(),
                               BetterCandidate);
  return std::move(*best);
}

}  // namespace ckb
