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

#include "ckb/corpus_designer.h"

#include <algorithm>
#include <cmath>
#include <istream>

#include <fmt/format.h>

#include "ckb/error.h"
#include "ckb/text_util.h"

namespace ckb {

size_t CandidateSentence::PhoneCount() const {
  size_t n = 0;
  for (const PhoneStreamItem& item : phones) n += item.phones.size();
  return n;
}

CandidateSentence MakeCandidate(std::string id, std::string text,
                                PhoneStream phones, const ScriptModel& script) {
  CandidateSentence c;
  c.id = std::move(id);
  c.text = std::move(text);
  c.diphones = DiphoneCounts(phones, script);
  c.phones = std::move(phones);
  return c;
}

CandidateSentence MakeCandidate(std::string id, std::string text,
                                const Transcriber& transcriber,
                                const std::map<std::string, size_t>* rank) {
  Transcription t = transcriber.Transcribe(text);
  CandidateSentence c = MakeCandidate(std::move(id), std::move(text),
                                      std::move(t.phones),
                                      transcriber.g2p().script());
  if (rank != nullptr && !t.words.empty()) {
    double sum = 0;
    for (const std::string& w : t.words) {
      auto it = rank->find(w);
      sum += static_cast<double>(it == rank->end() ? rank->size() + 1
                                                   : it->second);
    }
    c.word_freq_score = sum / static_cast<double>(t.words.size());
  }
  return c;
}

std::map<std::string, size_t> FrequencyRanks(
    const std::vector<TokenFrequency>& table) {
  std::vector<TokenFrequency> sorted = table;
  SortByFrequency(sorted);
  std::map<std::string, size_t> ranks;
  for (size_t i = 0; i < sorted.size(); ++i) {
    ranks.emplace(sorted[i].token, i + 1);
  }
  return ranks;
}

std::vector<PoolLine> ParsePool(std::istream& in,
                                const std::string& source_name) {
  std::vector<PoolLine> pool;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    PoolLine entry;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      entry.id = fmt::format("s{:06d}", pool.size() + 1);
      entry.text = TrimAscii(line);
    } else {
      entry.id = TrimAscii(line.substr(0, tab));
      entry.text = TrimAscii(line.substr(tab + 1));
    }
    if (entry.id.empty() || entry.text.empty()) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: empty id or text", source_name, line_no));
    }
    if (!seen.insert(entry.id).second) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: duplicate sentence id {}", source_name,
                              line_no, entry.id));
    }
    pool.push_back(std::move(entry));
  }
  return pool;
}

std::vector<WordSuggestion> SelectWords(
    const std::vector<TokenFrequency>& tokens,
    const std::set<Diphone>& missing, const G2p& g2p) {
  std::vector<WordSuggestion> out;
  if (missing.empty()) return out;
  for (const TokenFrequency& t : tokens) {
    PhoneSeq phones;
    try {
      phones = g2p.Convert(t.token);
    } catch (const Error&) {
      continue;
    }
    std::set<Diphone> contained;
    for (size_t i = 1; i < phones.size(); ++i) {
      Diphone pair{phones[i - 1], phones[i]};
      if (missing.count(pair)) contained.insert(std::move(pair));
    }
    if (!contained.empty()) out.push_back({t.token, t.frequency, contained.size()});
  }
  std::sort(out.begin(), out.end(),
            [](const WordSuggestion& a, const WordSuggestion& b) {
              if (a.missing_contained != b.missing_contained) {
                return a.missing_contained > b.missing_contained;
              }
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.token < b.token;
            });
  return out;
}

namespace {

struct Sparse {
  std::vector<std::pair<size_t, uint64_t>> items;
  uint64_t total = 0;
};

// Dense view over the sorted union of target and pool pairs, so that the
// divergence computed here is bit-identical to Divergence().
class DesignSpace {
 public:
  DesignSpace(const std::vector<CandidateSentence>& pool,
              const DiphoneDistribution& target) {
    std::map<Diphone, size_t> index;
    for (const auto& [pair, n] : target.counts()) index.emplace(pair, 0);
    for (const CandidateSentence& c : pool) {
      for (const auto& [pair, n] : c.diphones.counts()) index.emplace(pair, 0);
    }
    size_t k = 0;
    for (auto& [pair, i] : index) {
      i = k++;
      pairs_.push_back(pair);
    }
    target_rel_.assign(k, 0);
    in_target_.assign(k, false);
    const double tq = static_cast<double>(target.total());
    for (const auto& [pair, n] : target.counts()) {
      const size_t i = index.at(pair);
      target_rel_[i] = static_cast<double>(n) / tq;
      in_target_[i] = true;
      ++target_size_;
    }
    for (const CandidateSentence& c : pool) {
      Sparse s;
      for (const auto& [pair, n] : c.diphones.counts()) {
        s.items.emplace_back(index.at(pair), n);
      }
      s.total = c.diphones.total();
      sentences_.push_back(std::move(s));
    }
  }

  size_t size() const { return pairs_.size(); }
  const Diphone& pair(size_t k) const { return pairs_[k]; }
  bool in_target(size_t k) const { return in_target_[k]; }
  size_t target_size() const { return target_size_; }
  const Sparse& sentence(size_t j) const { return sentences_[j]; }

  double Tv(const std::vector<uint64_t>& agg, uint64_t total) const {
    if (total == 0) return 1.0;
    const double tp = static_cast<double>(total);
    double sum = 0;
    for (size_t k = 0; k < agg.size(); ++k) {
      if (agg[k] == 0 && !in_target_[k]) continue;
      const double a = agg[k] == 0 ? 0.0 : static_cast<double>(agg[k]) / tp;
      sum += std::fabs(a - target_rel_[k]);
    }
    return 0.5 * sum;
  }

 private:
  std::vector<Diphone> pairs_;
  std::vector<double> target_rel_;
  std::vector<bool> in_target_;
  size_t target_size_ = 0;
  std::vector<Sparse> sentences_;
};

class Selector {
 public:
  Selector(const DesignSpace& space)
      : space_(space),
        agg_(space.size(), 0),
        work_(space.size(), 0),
        mark_(space.size(), false) {}

  size_t covered() const { return covered_; }
  uint64_t total() const { return total_; }
  double Divergence() const { return space_.Tv(agg_, total_); }

  // Number of target pairs sentence j would newly cover.
  size_t Gain(size_t j) const {
    size_t gain = 0;
    for (const auto& [k, n] : space_.sentence(j).items) {
      if (space_.in_target(k) && agg_[k] == 0) ++gain;
    }
    return gain;
  }

  // Divergence and coverage after removing `remove` (may be null) and adding
  // `add`.
  double Evaluate(const Sparse* remove, const Sparse& add, size_t* covered) {
    uint64_t total = total_ + add.total;
    if (remove != nullptr) {
      for (const auto& [k, n] : remove->items) work_[k] -= n;
      total -= remove->total;
    }
    for (const auto& [k, n] : add.items) work_[k] += n;
    size_t cov = covered_;
    auto touch = [&](size_t k) {
      if (mark_[k] || !space_.in_target(k)) return;
      mark_[k] = true;
      cov += (work_[k] > 0 ? 1 : 0);
      cov -= (agg_[k] > 0 ? 1 : 0);
    };
    if (remove != nullptr) {
      for (const auto& [k, n] : remove->items) touch(k);
    }
    for (const auto& [k, n] : add.items) touch(k);
    const double d = space_.Tv(work_, total);
    if (remove != nullptr) {
      for (const auto& [k, n] : remove->items) {
        work_[k] = agg_[k];
        mark_[k] = false;
      }
    }
    for (const auto& [k, n] : add.items) {
      work_[k] = agg_[k];
      mark_[k] = false;
    }
    *covered = cov;
    return d;
  }

  void Apply(const Sparse* remove, const Sparse& add) {
    if (remove != nullptr) {
      for (const auto& [k, n] : remove->items) {
        if (space_.in_target(k) && agg_[k] == n) --covered_;
        agg_[k] -= n;
        work_[k] = agg_[k];
      }
      total_ -= remove->total;
    }
    for (const auto& [k, n] : add.items) {
      if (space_.in_target(k) && agg_[k] == 0) ++covered_;
      agg_[k] += n;
      work_[k] = agg_[k];
    }
    total_ += add.total;
  }

 private:
  const DesignSpace& space_;
  std::vector<uint64_t> agg_;
  std::vector<uint64_t> work_;
  std::vector<bool> mark_;
  size_t covered_ = 0;
  uint64_t total_ = 0;
};

}  // namespace

SelectionState SelectSentences(std::vector<CandidateSentence> pool,
                               const DiphoneDistribution& target,
                               const SelectionParams& params) {
  if (pool.empty()) {
    throw Error(ErrorKind::kEmptyPool, "candidate pool is empty");
  }
  if (target.empty()) {
    throw Error(ErrorKind::kEmptyDistribution, "target distribution is empty");
  }
  std::sort(pool.begin(), pool.end(),
            [](const CandidateSentence& a, const CandidateSentence& b) {
              return a.id < b.id;
            });
  for (size_t j = 1; j < pool.size(); ++j) {
    if (pool[j].id == pool[j - 1].id) {
      throw Error(ErrorKind::kInvalidArgument,
                  "duplicate sentence id " + pool[j].id);
    }
  }

  SelectionState state;
  std::set<Diphone> pool_support;
  for (const CandidateSentence& c : pool) {
    for (const auto& [pair, n] : c.diphones.counts()) pool_support.insert(pair);
  }
  for (const auto& [pair, n] : target.counts()) {
    if (pool_support.count(pair)) {
      state.reachable.insert(pair);
    } else {
      state.unreachable.push_back(pair);
    }
  }

  const DesignSpace space(pool, target);
  Selector sel(space);
  std::vector<bool> chosen(pool.size(), false);
  std::vector<size_t> order;

  // Phase 1: coverage.
  while (sel.covered() < state.reachable.size() &&
         order.size() < params.max_sentences) {
    size_t best = pool.size();
    size_t best_gain = 0;
    double best_div = 0;
    for (size_t j = 0; j < pool.size(); ++j) {
      if (chosen[j]) continue;
      const size_t gain = sel.Gain(j);
      if (gain == 0) continue;
      size_t cov = 0;
      const double d = sel.Evaluate(nullptr, space.sentence(j), &cov);
      bool better = best == pool.size() || gain > best_gain;
      if (!better && gain == best_gain) {
        if (d != best_div) {
          better = d < best_div;
        } else {
          better = pool[j].PhoneCount() < pool[best].PhoneCount();
        }
      }
      if (better) {
        best = j;
        best_gain = gain;
        best_div = d;
      }
    }
    if (best == pool.size()) break;
    sel.Apply(nullptr, space.sentence(best));
    chosen[best] = true;
    order.push_back(best);
    state.moves.push_back({1, pool[best].id, "", best_div});
  }

  // Phase 2: distribution matching by additions and coverage-preserving swaps.
  double current = sel.Divergence();
  for (;;) {
    double best_div = current;
    size_t best_add = pool.size();
    size_t best_slot = order.size();  // order.size() means a plain addition
    if (order.size() < params.max_sentences) {
      for (size_t j = 0; j < pool.size(); ++j) {
        if (chosen[j]) continue;
        size_t cov = 0;
        const double d = sel.Evaluate(nullptr, space.sentence(j), &cov);
        if (d < best_div) {
          best_div = d;
          best_add = j;
          best_slot = order.size();
        }
      }
    }
    for (size_t slot = 0; slot < order.size(); ++slot) {
      const Sparse& out = space.sentence(order[slot]);
      for (size_t j = 0; j < pool.size(); ++j) {
        if (chosen[j]) continue;
        size_t cov = 0;
        const double d = sel.Evaluate(&out, space.sentence(j), &cov);
        if (cov >= sel.covered() && d < best_div) {
          best_div = d;
          best_add = j;
          best_slot = slot;
        }
      }
    }
    if (best_add == pool.size() || current - best_div < params.epsilon) break;
    SelectionMove move{2, pool[best_add].id, "", best_div};
    if (best_slot == order.size()) {
      sel.Apply(nullptr, space.sentence(best_add));
      order.push_back(best_add);
    } else {
      const size_t removed = order[best_slot];
      sel.Apply(&space.sentence(removed), space.sentence(best_add));
      chosen[removed] = false;
      move.removed = pool[removed].id;
      order[best_slot] = best_add;
    }
    chosen[best_add] = true;
    state.moves.push_back(std::move(move));
    current = best_div;
  }

  // Prefix metrics in final order.
  Selector replay(space);
  for (size_t j : order) {
    replay.Apply(nullptr, space.sentence(j));
    state.selected.push_back(pool[j].id);
    state.aggregate.Merge(pool[j].diphones);
    state.ranking.push_back(
        {pool[j].id,
         static_cast<double>(replay.covered()) /
             static_cast<double>(space.target_size()),
         replay.Divergence()});
  }
  state.coverage = static_cast<double>(replay.covered()) /
                   static_cast<double>(space.target_size());
  state.divergence = replay.Divergence();
  return state;
}

SelectionReport EvaluateSelection(const SelectionState& state,
                                  const DiphoneDistribution& target,
                                  size_t top_n) {
  SelectionReport report;
  report.sentence_count = state.selected.size();
  const CoverageResult cov = Coverage(state.aggregate, target.Support());
  report.coverage = cov.covered;
  report.missing = cov.missing;
  if (state.aggregate.empty()) {
    report.divergence = 1.0;
    report.chi_square = 2.0;
  } else {
    report.divergence = Divergence(state.aggregate, target);
    report.chi_square = ChiSquare(state.aggregate, target);
  }
  for (const auto& [pair, rf] : TopN(target, top_n)) {
    report.top.push_back({pair, rf, state.aggregate.RelFreq(pair)});
  }
  return report;
}

std::string SelectionReport::ToTsv() const {
  std::string out;
  out += fmt::format("sentences\t{}\n", sentence_count);
  out += fmt::format("coverage\t{:.6f}\n", coverage);
  out += fmt::format("divergence\t{:.6f}\n", divergence);
  out += fmt::format("chi_square\t{:.6f}\n", chi_square);
  out += fmt::format("missing\t{}\n", missing.size());
  for (const Diphone& pair : missing) {
    out += fmt::format("missing_pair\t{}\t{}\n", pair.first, pair.second);
  }
  out += "rank\tphoneA\tphoneB\tcorpus_relfreq\tselection_relfreq\n";
  for (size_t i = 0; i < top.size(); ++i) {
    out += fmt::format("{}\t{}\t{}\t{:.6f}\t{:.6f}\n", i + 1, top[i].pair.first,
                       top[i].pair.second, top[i].corpus, top[i].selection);
  }
  return out;
}

std::string SelectionTsv(const SelectionState& state,
                         const std::vector<CandidateSentence>& pool) {
  std::map<std::string, const CandidateSentence*> by_id;
  for (const CandidateSentence& c : pool) by_id.emplace(c.id, &c);
  std::string out = "rank\tid\tcoverage_after\tdivergence_after\ttext\n";
  for (size_t i = 0; i < state.ranking.size(); ++i) {
    const RankedSentence& r = state.ranking[i];
    auto it = by_id.find(r.id);
    out += fmt::format("{}\t{}\t{:.6f}\t{:.6f}\t{}\n", i + 1, r.id,
                       r.coverage_after, r.divergence_after,
                       it == by_id.end() ? std::string() : it->second->text);
  }
  return out;
}

}  // namespace ckb
