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

// Trigram language model with interpolated absolute discounting, stored in
// back-off form, with ARPA import/export and perplexity.

#ifndef CKB_NGRAM_LM_H_
#define CKB_NGRAM_LM_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ckb {

inline constexpr std::string_view kSentenceBegin = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknown = "<unk>";
inline constexpr double kLogZero = -99.0;

using Ngram = std::vector<std::string>;

struct NgramCounts {
  int order = 3;
  // counts[n - 1] holds n-grams of length n. Unigrams exclude <s>.
  std::vector<std::map<Ngram, uint64_t>> counts;
  // Word types seen or declared; excludes the three markers.
  std::set<std::string> vocab;
  bool closed_vocab = false;

  bool empty() const;
  void Merge(const NgramCounts& other);
  // order<TAB>w1 w2 ...<TAB>count, by order then n-gram.
  std::string ToTsv() const;
};

// Counts sentences padded with <s> ... </s>. With a closed vocabulary,
// tokens outside it become <unk>.
NgramCounts CountNgrams(const std::vector<std::vector<std::string>>& sentences,
                        const std::set<std::string>* vocab = nullptr,
                        int order = 3);

struct EstimateOptions {
  double discount = 0.7;
  // n-grams of order >= 2 seen fewer times are pruned; 1 keeps all.
  uint64_t min_count = 1;
};

class NgramModel {
 public:
  int order() const { return order_; }
  // Includes <s>, </s> and <unk>.
  const std::set<std::string>& vocab() const { return vocab_; }
  // logprob[n - 1]: n-gram -> log10 P(last | rest).
  const std::vector<std::map<Ngram, double>>& logprob() const { return logprob_; }
  // backoff[n - 1] for n < order: history -> log10 weight.
  const std::vector<std::map<Ngram, double>>& backoff() const { return backoff_; }

  // Tokens outside the vocabulary map to <unk>.
  const std::string& Map(const std::string& token) const;

  // log10 P(word | history) by back-off recursion; only the last order-1
  // history tokens are used.
  double LogProb(const Ngram& history, const std::string& word) const;
  double Prob(const Ngram& history, const std::string& word) const;

  // Predictable words: the vocabulary without <s>.
  std::vector<std::string> PredictionVocab() const;

  friend class NgramModelBuilder;

 private:
  int order_ = 3;
  std::set<std::string> vocab_;
  std::vector<std::map<Ngram, double>> logprob_;
  std::vector<std::map<Ngram, double>> backoff_;
  std::string unk_{kUnknown};
};

// Throws Error(kInvalidArgument) for d outside (0, 1) and
// Error(kDegenerateCounts) without unigram mass.
NgramModel Estimate(const NgramCounts& counts, const EstimateOptions& options = {});

// Σ log10 P over the tokens and </s>.
double SentenceLogProb(const NgramModel& model,
                       const std::vector<std::string>& tokens);

// 10^(-Σ logprob / N), N counting every predicted token including </s>.
// Throws Error(kInvalidArgument) for an empty test set.
double Perplexity(const NgramModel& model,
                  const std::vector<std::vector<std::string>>& sentences);

std::string ToArpa(const NgramModel& model);
void ArpaExport(const NgramModel& model, const std::string& path);
// Throws Error(kMalformedFile) with line numbers.
NgramModel ParseArpa(std::istream& in, const std::string& source_name);
NgramModel ArpaImport(const std::string& path);

}  // namespace ckb

#endif  // CKB_NGRAM_LM_H_
