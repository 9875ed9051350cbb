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

// Word and phoneme error rates by Levenshtein alignment, with per-topic
// reporting.

#ifndef CKB_SCORER_H_
#define CKB_SCORER_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ckb {

enum class EditOp { kHit, kSubstitution, kDeletion, kInsertion };

char EditOpSymbol(EditOp op);  // = S D I

struct AlignmentResult {
  int hits = 0;
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int ref_len = 0;
  std::vector<EditOp> ops;  // in reference order

  int errors() const { return substitutions + deletions + insertions; }
  // Percentage; Error(kEmptyReference) for an empty reference.
  double ErrorRate() const;
};

// Unit-cost alignment. Among equal-cost paths the trace prefers a hit, then
// a substitution, then a deletion, then an insertion at each step from the
// end.
AlignmentResult Align(const std::vector<std::string>& ref,
                      const std::vector<std::string>& hyp);

using TokenPair = std::pair<std::vector<std::string>, std::vector<std::string>>;

struct ErrorRate {
  uint64_t errors = 0;
  uint64_t ref_len = 0;
  size_t utterances = 0;
  double pooled = 0;          // 100 * errors / ref_len
  double utterance_mean = 0;  // mean of per-utterance rates with ref_len > 0
};

// Throws Error(kEmptyReference) for no pairs or a zero total reference.
ErrorRate ScorePairs(const std::vector<TokenPair>& pairs);
// Pooled percentages.
double Wer(const std::vector<TokenPair>& pairs);
double Per(const std::vector<TokenPair>& pairs);

// One decimal, as error rates are conventionally reported.
std::string FormatRate(double percent);

// General, Religious, Sport, Politics, Economics, Social, Novel, Letter,
// Conversation, Scientific/Technology, Poet, then Other.
const std::vector<std::string>& TopicOrder();
// Case-insensitive match against TopicOrder; nullopt if unknown.
std::optional<std::string> CanonicalTopic(std::string_view label);

struct ScoredUtterance {
  std::string utt_id;
  std::string topic;
  std::vector<std::string> ref_words;
  std::vector<std::string> hyp_words;
  std::vector<std::string> ref_phones;
  std::vector<std::string> hyp_phones;
};

struct TopicRow {
  std::string topic;
  size_t utterances = 0;
  uint64_t ref_words = 0;
  uint64_t word_errors = 0;
  uint64_t ref_phones = 0;
  uint64_t phone_errors = 0;

  std::optional<double> Wer() const;
  std::optional<double> Per() const;
};

struct TopicReport {
  std::vector<TopicRow> rows;  // every topic in TopicOrder
  TopicRow overall;
  double wer_utterance_mean = 0;
  double per_utterance_mean = 0;
  std::vector<std::string> warnings;

  // Summary block then topic<TAB>utterances<TAB>ref_words<TAB>wer<TAB>
  // ref_phones<TAB>per rows; undefined rates print NA.
  std::string ToTsv() const;
};

// Unknown topics are scored under Other with a warning.
TopicReport PerTopicReport(const std::vector<ScoredUtterance>& utterances);

}  // namespace ckb

#endif  // CKB_SCORER_H_
