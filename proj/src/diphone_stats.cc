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

#include "ckb/diphone_stats.h"

#include <algorithm>
#include <cmath>
#include <istream>

#include <fmt/format.h>

#include "ckb/error.h"
#include "ckb/text_util.h"

namespace ckb {

std::vector<PhoneSeq> Segments(const PhoneStream& stream) {
  std::vector<PhoneSeq> segments;
  PhoneSeq current;
  for (const PhoneStreamItem& item : stream) {
    if (item.is_pause) {
      if (!current.empty()) segments.push_back(std::move(current));
      current.clear();
    } else {
      current.insert(current.end(), item.phones.begin(), item.phones.end());
    }
  }
  if (!current.empty()) segments.push_back(std::move(current));
  return segments;
}

void DiphoneDistribution::Add(const Diphone& pair, uint64_t n) {
  if (n == 0) return;
  counts_[pair] += n;
  total_ += n;
}

void DiphoneDistribution::Merge(const DiphoneDistribution& other) {
  for (const auto& [pair, n] : other.counts_) Add(pair, n);
}

uint64_t DiphoneDistribution::count(const Diphone& pair) const {
  auto it = counts_.find(pair);
  return it == counts_.end() ? 0 : it->second;
}

double DiphoneDistribution::RelFreq(const Diphone& pair) const {
  if (total_ == 0) return 0;
  return static_cast<double>(count(pair)) / static_cast<double>(total_);
}

std::set<Diphone> DiphoneDistribution::Support() const {
  std::set<Diphone> support;
  for (const auto& [pair, n] : counts_) support.insert(pair);
  return support;
}

std::string DiphoneDistribution::ToTsv() const {
  std::string out;
  for (const auto& [pair, n] : counts_) {
    out += fmt::format("{}\t{}\t{}\t{:.12f}\n", pair.first, pair.second, n,
                       RelFreq(pair));
  }
  return out;
}

DiphoneDistribution DiphoneDistribution::FromTsv(
    std::istream& in, const std::string& source_name,
    const ScriptModel& script) {
  DiphoneDistribution dist;
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
    if (f.size() < 3) bad("expected phoneA<TAB>phoneB<TAB>count[<TAB>relfreq]");
    if (!script.FindPhoneme(f[0]) || !script.FindPhoneme(f[1])) {
      bad("unknown phoneme in pair " + f[0] + " " + f[1]);
    }
    char* end = nullptr;
    const unsigned long long n = std::strtoull(f[2].c_str(), &end, 10);
    if (end == f[2].c_str() || *end != '\0') bad("bad count " + f[2]);
    dist.Add({f[0], f[1]}, n);
  }
  return dist;
}

// ---------------------------------------------------------------------------

DiphoneCounter::DiphoneCounter(const ScriptModel& script)
    : script_(&script),
      n_(script.PhonemeInventory().size()),
      counts_(n_ * n_, 0) {}

void DiphoneCounter::AddSegment(const PhoneSeq& segment) {
  int prev = -1;
  for (const std::string& phone : segment) {
    const int idx = script_->PhonemeIndex(phone);
    if (prev >= 0) ++counts_[static_cast<size_t>(prev) * n_ + idx];
    prev = idx;
  }
}

void DiphoneCounter::AddStream(const PhoneStream& stream) {
  int prev = -1;
  for (const PhoneStreamItem& item : stream) {
    if (item.is_pause) {
      prev = -1;
      continue;
    }
    for (const std::string& phone : item.phones) {
      const int idx = script_->PhonemeIndex(phone);
      if (prev >= 0) ++counts_[static_cast<size_t>(prev) * n_ + idx];
      prev = idx;
    }
  }
}

void DiphoneCounter::Merge(const DiphoneCounter& other) {
  if (other.n_ != n_) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot merge counters over different inventories");
  }
  for (size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

DiphoneDistribution DiphoneCounter::Distribution() const {
  const auto& inv = script_->PhonemeInventory();
  DiphoneDistribution dist;
  for (size_t a = 0; a < n_; ++a) {
    for (size_t b = 0; b < n_; ++b) {
      dist.Add({inv[a].code, inv[b].code}, counts_[a * n_ + b]);
    }
  }
  return dist;
}

DiphoneDistribution DiphoneCounts(const PhoneStream& stream,
                                  const ScriptModel& script) {
  DiphoneCounter counter(script);
  counter.AddStream(stream);
  return counter.Distribution();
}

double Divergence(const DiphoneDistribution& p, const DiphoneDistribution& q) {
  if (p.empty() || q.empty()) {
    throw Error(ErrorKind::kEmptyDistribution,
                "divergence needs two non-empty distributions");
  }
  const double tp = static_cast<double>(p.total());
  const double tq = static_cast<double>(q.total());
  double sum = 0;
  auto ip = p.counts().begin();
  auto iq = q.counts().begin();
  // Merge walk over the sorted union of supports.
  while (ip != p.counts().end() || iq != q.counts().end()) {
    double a = 0, b = 0;
    if (iq == q.counts().end() ||
        (ip != p.counts().end() && ip->first < iq->first)) {
      a = static_cast<double>(ip->second) / tp;
      ++ip;
    } else if (ip == p.counts().end() || iq->first < ip->first) {
      b = static_cast<double>(iq->second) / tq;
      ++iq;
    } else {
      a = static_cast<double>(ip->second) / tp;
      b = static_cast<double>(iq->second) / tq;
      ++ip;
      ++iq;
    }
    sum += std::fabs(a - b);
  }
  return 0.5 * sum;
}

double ChiSquare(const DiphoneDistribution& p, const DiphoneDistribution& q) {
  if (p.empty() || q.empty()) {
    throw Error(ErrorKind::kEmptyDistribution,
                "chi-square needs two non-empty distributions");
  }
  std::set<Diphone> support = p.Support();
  for (const auto& [pair, n] : q.counts()) support.insert(pair);
  double sum = 0;
  for (const Diphone& pair : support) {
    const double a = p.RelFreq(pair);
    const double b = q.RelFreq(pair);
    sum += (a - b) * (a - b) / (a + b);
  }
  return sum;
}

CoverageResult Coverage(const DiphoneDistribution& p,
                        const std::set<Diphone>& target_support) {
  if (target_support.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "coverage target is empty");
  }
  CoverageResult result;
  size_t covered = 0;
  for (const Diphone& pair : target_support) {
    if (p.count(pair) > 0) {
      ++covered;
    } else {
      result.missing.push_back(pair);
    }
  }
  result.covered =
      static_cast<double>(covered) / static_cast<double>(target_support.size());
  return result;
}

std::vector<std::pair<Diphone, double>> TopN(const DiphoneDistribution& p,
                                             size_t n) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "top-N needs n >= 1");
  std::vector<std::pair<Diphone, uint64_t>> items(p.counts().begin(),
                                                  p.counts().end());
  // Counts share one denominator, so ordering by count orders by relfreq.
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (items.size() > n) items.resize(n);
  std::vector<std::pair<Diphone, double>> out;
  out.reserve(items.size());
  for (const auto& [pair, count] : items) out.emplace_back(pair, p.RelFreq(pair));
  return out;
}

std::string TopNTsv(const DiphoneDistribution& p, size_t n) {
  std::string out = "rank\tphoneA\tphoneB\trelfreq\n";
  size_t rank = 0;
  for (const auto& [pair, rf] : TopN(p, n)) {
    out += fmt::format("{}\t{}\t{}\t{:.12f}\n", ++rank, pair.first,
                       pair.second, rf);
  }
  return out;
}

}  // namespace ckb
