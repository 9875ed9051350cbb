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

// Di-phone statistics over phonetically transcribed text. Adjacent words
// form di-phones across their boundary; a pause (punctuation) never does.

#ifndef CKB_DIPHONE_STATS_H_
#define CKB_DIPHONE_STATS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ckb/g2p.h"
#include "ckb/script_model.h"

namespace ckb {

using Diphone = std::pair<std::string, std::string>;

// A word's phones, or a pause.
struct PhoneStreamItem {
  bool is_pause = false;
  PhoneSeq phones;
};
using PhoneStream = std::vector<PhoneStreamItem>;

// Concatenates consecutive words into pause-delimited segments.
std::vector<PhoneSeq> Segments(const PhoneStream& stream);

class DiphoneDistribution {
 public:
  void Add(const Diphone& pair, uint64_t n = 1);
  void Merge(const DiphoneDistribution& other);

  const std::map<Diphone, uint64_t>& counts() const { return counts_; }
  uint64_t total() const { return total_; }
  uint64_t count(const Diphone& pair) const;
  // count / total, or 0 for an empty distribution.
  double RelFreq(const Diphone& pair) const;
  std::set<Diphone> Support() const;
  bool empty() const { return total_ == 0; }

  // phoneA<TAB>phoneB<TAB>count<TAB>relfreq, sorted by pair; no header.
  std::string ToTsv() const;
  // Reads ToTsv output (comment lines allowed); relfreq is recomputed.
  static DiphoneDistribution FromTsv(std::istream& in,
                                     const std::string& source_name,
                                     const ScriptModel& script);

  friend bool operator==(const DiphoneDistribution&,
                         const DiphoneDistribution&) = default;

 private:
  std::map<Diphone, uint64_t> counts_;
  uint64_t total_ = 0;
};

// Dense accumulator for large corpora; merges associatively.
class DiphoneCounter {
 public:
  explicit DiphoneCounter(const ScriptModel& script);

  // Throws Error(kUnknownPhoneme).
  void AddStream(const PhoneStream& stream);
  void AddSegment(const PhoneSeq& segment);
  void Merge(const DiphoneCounter& other);
  DiphoneDistribution Distribution() const;

 private:
  const ScriptModel* script_;
  size_t n_;
  std::vector<uint64_t> counts_;
};

DiphoneDistribution DiphoneCounts(const PhoneStream& stream,
                                  const ScriptModel& script);

// Total-variation distance 0.5 * sum |p - q| over the union of supports.
// Throws Error(kEmptyDistribution) if either side is empty.
double Divergence(const DiphoneDistribution& p, const DiphoneDistribution& q);

// Symmetric chi-square sum (p - q)^2 / (p + q), reported for diagnostics.
double ChiSquare(const DiphoneDistribution& p, const DiphoneDistribution& q);

struct CoverageResult {
  double covered = 0;
  std::vector<Diphone> missing;  // sorted
};

// Throws Error(kInvalidArgument) for an empty target.
CoverageResult Coverage(const DiphoneDistribution& p,
                        const std::set<Diphone>& target_support);

// Descending relative frequency, ties by pair order.
std::vector<std::pair<Diphone, double>> TopN(const DiphoneDistribution& p,
                                             size_t n);
// rank<TAB>phoneA<TAB>phoneB<TAB>relfreq rows for plotting.
std::string TopNTsv(const DiphoneDistribution& p, size_t n);

}  // namespace ckb

#endif  // CKB_DIPHONE_STATS_H_
