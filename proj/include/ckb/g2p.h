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

// Rule-based grapheme-to-phoneme conversion for Sorani.
//
// A word is segmented into graphemes, every reading of the ambiguous letters
// (ی as y/i, و as w/u, وو as uu or a two-phone split) is expanded, and the
// unwritten short vowel ix may be inserted between any two consonants. Each
// candidate is syllabified and charged a weighted sum of constraint
// violations; the cheapest candidate wins.

#ifndef CKB_G2P_H_
#define CKB_G2P_H_

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckb/script_model.h"

namespace ckb {

using PhoneSeq = std::vector<std::string>;

// Phone codes joined by single spaces.
std::string FormatPhones(const PhoneSeq& phones);
// Inverse of FormatPhones; throws Error(kUnknownPhoneme) for codes outside the
// inventory.
PhoneSeq ParsePhones(std::string_view text, const ScriptModel& script);

enum class Constraint {
  kResidue,        // phones left outside every syllable
  kComplexOnset,   // onset of two consonants
  kHiatus,         // syllable without onset (adjacent vowels, bare initial)
  kCodaSonority,   // two-consonant coda that does not fall in sonority
  kEpenthesis,     // inserted ix
  kDigraphSplit,   // وو read as two phones
};
inline constexpr size_t kNumConstraints = 6;

std::string_view ConstraintName(Constraint c);

class ConstraintSet {
 public:
  // residue 1000, complex-onset 10, hiatus 8, coda-sonority 4,
  // digraph-split 2, epenthesis 1.
  static ConstraintSet Default();

  // TSV name<TAB>weight. Unlisted constraints keep their default weight.
  static ConstraintSet Parse(std::istream& in, const std::string& source_name);
  static ConstraintSet Load(const std::string& path);

  // Throws Error(kInvalidArgument) for non-positive weights or when residue
  // does not outweigh all other constraints together.
  void Set(Constraint c, double weight);
  double weight(Constraint c) const {
    return weights_[static_cast<size_t>(c)];
  }
  void Validate() const;

 private:
  std::array<double, kNumConstraints> weights_{};
};

struct Syllable {
  PhoneSeq onset;
  std::string nucleus;
  PhoneSeq coda;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

struct SyllableParse {
  std::vector<Syllable> syllables;
  int residue = 0;
  bool ok() const { return residue == 0 && !syllables.empty(); }
};

// Deterministic onset-first parse. Templates are CV, CVC and CVCC; an onset
// may stretch to two consonants or be empty at a cost, and consonants that
// fit nowhere are counted as residue.
SyllableParse ParseSyllables(const PhoneSeq& phones, const ScriptModel& script);

// The successful parse, or nullopt when the sequence has no vowel or leaves
// residue.
std::optional<std::vector<Syllable>> Syllabify(const PhoneSeq& phones,
                                               const ScriptModel& script);

enum class PhoneSource {
  kFixed,          // unambiguous letter
  kReading,        // chosen reading of an ambiguous letter (ی, و)
  kDigraphMerged,  // وو as one long vowel
  kDigraphSplit,   // one half of وو read as two phones
  kEpenthesis,     // inserted ix
};

struct PhoneOrigin {
  PhoneSource source = PhoneSource::kFixed;
  int unit = -1;  // grapheme unit index; -1 for epenthesis
};

using Violations = std::array<int, kNumConstraints>;

struct PronunciationCandidate {
  PhoneSeq phones;
  std::vector<PhoneOrigin> provenance;  // parallel to phones
  SyllableParse parse;
  Violations violations{};
  double penalty = 0;

  int EpenthesisCount() const;
  int DigraphSplitCount() const;
};

// Fills parse, violations and penalty from phones and provenance.
void ScoreCandidate(PronunciationCandidate& candidate,
                    const ScriptModel& script,
                    const ConstraintSet& constraints);
double Score(const PronunciationCandidate& candidate,
             const ConstraintSet& constraints);

// Ordering used to pick the winner: penalty, then fewer ix insertions, then
// the lexicographically smaller phone sequence.
bool BetterCandidate(const PronunciationCandidate& a,
                     const PronunciationCandidate& b);

struct G2pOptions {
  size_t candidate_cap = 4096;
  size_t beam = 512;
};

struct CandidateSet {
  std::vector<PronunciationCandidate> candidates;  // scored, de-duplicated
  bool cap_hit = false;  // expansion exceeded the cap; beam search was used
};

class G2p {
 public:
  G2p(const ScriptModel& script, ConstraintSet constraints,
      G2pOptions options = {});

  const ScriptModel& script() const { return *script_; }
  const ConstraintSet& constraints() const { return constraints_; }

  // Throws Error(kUnknownGrapheme) for characters outside the alphabet.
  CandidateSet GenerateCandidates(std::string_view token) const;

  // Throws Error(kNoCandidate) for an empty token.
  PronunciationCandidate Best(std::string_view token) const;
  PhoneSeq Convert(std::string_view token) const { return Best(token).phones; }

  // Number of (reading, insertion) combinations before de-duplication,
  // saturating at SIZE_MAX.
  size_t ExpansionSize(std::string_view token) const;

 private:
  struct Option {
    PhoneSeq phones;
    PhoneSource source;
  };
  std::vector<std::vector<Option>> UnitOptions(
      const std::vector<GraphemeUnit>& units) const;
  double PartialPenalty(const PronunciationCandidate& prefix) const;

  const ScriptModel* script_;
  ConstraintSet constraints_;
  G2pOptions options_;
};

}  // namespace ckb

#endif  // CKB_G2P_H_
