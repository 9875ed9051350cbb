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

// Sentence selection for a phonetically balanced recording script: cover the
// di-phones of a target corpus, then approach its relative frequencies.

#ifndef CKB_CORPUS_DESIGNER_H_
#define CKB_CORPUS_DESIGNER_H_

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ckb/diphone_stats.h"
#include "ckb/token_frequency.h"
#include "ckb/transcriber.h"

namespace ckb {

struct CandidateSentence {
  std::string id;
  std::string text;
  PhoneStream phones;
  DiphoneDistribution diphones;
  // Mean frequency rank (1 = most frequent) of the sentence's words; words
  // outside the rank table get rank table_size + 1. Zero without a table.
  double word_freq_score = 0;

  size_t PhoneCount() const;
};

// rank: token -> 1-based frequency rank; may be null.
CandidateSentence MakeCandidate(std::string id, std::string text,
                                const Transcriber& transcriber,
                                const std::map<std::string, size_t>* rank);
CandidateSentence MakeCandidate(std::string id, std::string text,
                                PhoneStream phones, const ScriptModel& script);

std::map<std::string, size_t> FrequencyRanks(
    const std::vector<TokenFrequency>& table);

struct PoolLine {
  std::string id;
  std::string text;
};

// One sentence per line, either `id<TAB>text` or bare text. Bare lines get
// ids s000001, s000002, ... by their position among non-blank lines.
std::vector<PoolLine> ParsePool(std::istream& in, const std::string& source_name);

struct WordSuggestion {
  std::string token;
  uint64_t frequency = 0;
  size_t missing_contained = 0;
};

// Tokens whose own pronunciation contains at least one missing di-phone,
// ranked by missing di-phones contained, then frequency, then token.
// Tokens G2P cannot convert are skipped.
std::vector<WordSuggestion> SelectWords(
    const std::vector<TokenFrequency>& tokens,
    const std::set<Diphone>& missing, const G2p& g2p);

struct SelectionParams {
  double epsilon = 1e-4;
  size_t max_sentences = 700;
};

struct RankedSentence {
  std::string id;
  double coverage_after = 0;
  double divergence_after = 0;
};

struct SelectionMove {
  int phase = 1;
  std::string added;
  std::string removed;  // empty for plain additions
  double divergence_after = 0;
};

struct SelectionState {
  std::vector<std::string> selected;
  DiphoneDistribution aggregate;
  double coverage = 0;  // over the full target support
  // Divergence of an empty selection is reported as 1, the maximum.
  double divergence = 1;
  std::set<Diphone> reachable;
  std::vector<Diphone> unreachable;
  std::vector<RankedSentence> ranking;  // prefix metrics in selected order
  std::vector<SelectionMove> moves;
};

// Throws Error(kEmptyPool) or Error(kEmptyDistribution). Target pairs that
// no pool sentence contains are reported in `unreachable`.
SelectionState SelectSentences(std::vector<CandidateSentence> pool,
                               const DiphoneDistribution& target,
                               const SelectionParams& params = {});

struct PairedFrequency {
  Diphone pair;
  double corpus = 0;
  double selection = 0;
};

struct SelectionReport {
  size_t sentence_count = 0;
  double coverage = 0;
  double divergence = 1;
  double chi_square = 0;
  std::vector<Diphone> missing;
  std::vector<PairedFrequency> top;

  std::string ToTsv() const;
};

// Recomputes every metric from the state's aggregate.
SelectionReport EvaluateSelection(const SelectionState& state,
                                  const DiphoneDistribution& target,
                                  size_t top_n = 20);

// rank<TAB>id<TAB>coverage_after<TAB>divergence_after<TAB>text
std::string SelectionTsv(const SelectionState& state,
                         const std::vector<CandidateSentence>& pool);

}  // namespace ckb

#endif  // CKB_CORPUS_DESIGNER_H_
