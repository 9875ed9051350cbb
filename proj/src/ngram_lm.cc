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

#include "ckb/ngram_lm.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <fstream>
#include <istream>
#include <sstream>

#include <fmt/format.h>

#include "ckb/error.h"
#include "ckb/text_util.h"

namespace ckb {

namespace {

bool IsMarker(const std::string& token) {
  return token == kSentenceBegin || token == kSentenceEnd || token == kUnknown;
}

Ngram Prefix(const Ngram& g) { return Ngram(g.begin(), g.end() - 1); }
Ngram Suffix(const Ngram& g) { return Ngram(g.begin() + 1, g.end()); }

std::string JoinNgram(const Ngram& g) { return Join(g, " "); }

}  // namespace

bool NgramCounts::empty() const {
  for (const auto& m : counts) {
    if (!m.empty()) return false;
  }
  return true;
}

void NgramCounts::Merge(const NgramCounts& other) {
  if (other.order != order || other.closed_vocab != closed_vocab) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot merge counts of different order or vocabulary mode");
  }
  counts.resize(static_cast<size_t>(order));
  for (size_t n = 0; n < other.counts.size(); ++n) {
    for (const auto& [g, c] : other.counts[n]) counts[n][g] += c;
  }
  vocab.insert(other.vocab.begin(), other.vocab.end());
}

std::string NgramCounts::ToTsv() const {
  std::string out;
  for (size_t n = 0; n < counts.size(); ++n) {
    for (const auto& [g, c] : counts[n]) {
      out += fmt::format("{}\t{}\t{}\n", n + 1, JoinNgram(g), c);
    }
  }
  return out;
}

NgramCounts CountNgrams(const std::vector<std::vector<std::string>>& sentences,
                        const std::set<std::string>* vocab, int order) {
  if (order < 1) throw Error(ErrorKind::kInvalidArgument, "order must be >= 1");
  NgramCounts counts;
  counts.order = order;
  counts.counts.resize(static_cast<size_t>(order));
  if (vocab != nullptr) {
    counts.closed_vocab = true;
    for (const std::string& w : *vocab) {
      if (!IsMarker(w)) counts.vocab.insert(w);
    }
  }
  for (const auto& sentence : sentences) {
    Ngram seq{std::string(kSentenceBegin)};
    for (const std::string& token : sentence) {
      if (token.empty()) continue;
      if (vocab != nullptr && !counts.vocab.count(token)) {
        seq.emplace_back(kUnknown);
      } else {
        seq.push_back(token);
        if (vocab == nullptr && !IsMarker(token)) counts.vocab.insert(token);
      }
    }
    seq.emplace_back(kSentenceEnd);
    for (size_t n = 1; n <= static_cast<size_t>(order); ++n) {
      for (size_t i = (n == 1 ? 1 : 0); i + n <= seq.size(); ++i) {
        ++counts.counts[n - 1][Ngram(seq.begin() + i, seq.begin() + i + n)];
      }
    }
  }
  return counts;
}

class NgramModelBuilder {
 public:
  static NgramModel Make(int order, std::set<std::string> vocab) {
    NgramModel m;
    m.order_ = order;
    m.vocab_ = std::move(vocab);
    m.logprob_.resize(static_cast<size_t>(order));
    m.backoff_.resize(static_cast<size_t>(order > 1 ? order - 1 : 0));
    return m;
  }
  static std::vector<std::map<Ngram, double>>& logprob(NgramModel& m) {
    return m.logprob_;
  }
  static std::vector<std::map<Ngram, double>>& backoff(NgramModel& m) {
    return m.backoff_;
  }
};

const std::string& NgramModel::Map(const std::string& token) const {
  return vocab_.count(token) ? token : unk_;
}

double NgramModel::LogProb(const Ngram& history, const std::string& word) const {
  const std::string& w = Map(word);
  const size_t keep = static_cast<size_t>(order_ - 1);
  Ngram h;
  const size_t start = history.size() > keep ? history.size() - keep : 0;
  for (size_t i = start; i < history.size(); ++i) h.push_back(Map(history[i]));
  double bo_sum = 0;
  for (;;) {
    Ngram key = h;
    key.push_back(w);
    const auto& table = logprob_[h.size()];
    auto it = table.find(key);
    if (it != table.end()) return bo_sum + it->second;
    if (h.empty()) return bo_sum + kLogZero;
    const auto& bo = backoff_[h.size() - 1];
    auto b = bo.find(h);
    if (b != bo.end()) bo_sum += b->second;
    h.erase(h.begin());
  }
}

double NgramModel::Prob(const Ngram& history, const std::string& word) const {
  return std::pow(10.0, LogProb(history, word));
}

std::vector<std::string> NgramModel::PredictionVocab() const {
  std::vector<std::string> out;
  for (const std::string& w : vocab_) {
    if (w != kSentenceBegin) out.push_back(w);
  }
  return out;
}

NgramModel Estimate(const NgramCounts& counts, const EstimateOptions& options) {
  const double d = options.discount;
  if (!(d > 0 && d < 1)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("discount {} outside (0, 1)", d));
  }
  const int order = counts.order;
  if (counts.counts.empty() || counts.counts[0].empty()) {
    throw Error(ErrorKind::kDegenerateCounts, "no unigram counts");
  }

  std::set<std::string> vocab = counts.vocab;
  vocab.emplace(kSentenceEnd);
  vocab.emplace(kUnknown);
  std::set<std::string> model_vocab = vocab;
  model_vocab.emplace(kSentenceBegin);
  NgramModel model = NgramModelBuilder::Make(order, std::move(model_vocab));
  auto& logprob = NgramModelBuilder::logprob(model);
  auto& backoff = NgramModelBuilder::backoff(model);

  // Pruned counts per order.
  std::vector<std::map<Ngram, uint64_t>> kept(static_cast<size_t>(order));
  kept[0] = counts.counts[0];
  for (size_t n = 1; n < static_cast<size_t>(order) && n < counts.counts.size();
       ++n) {
    for (const auto& [g, c] : counts.counts[n]) {
      if (c >= options.min_count) kept[n].emplace(g, c);
    }
  }

  // Unigrams.
  uint64_t total = 0;
  size_t types = 0;
  for (const auto& [g, c] : kept[0]) {
    total += c;
    if (c > 0) ++types;
  }
  if (total == 0) throw Error(ErrorKind::kDegenerateCounts, "no unigram mass");
  const double big_n = static_cast<double>(total);
  const double floor =
      d * static_cast<double>(types) / (big_n * static_cast<double>(vocab.size()));
  std::map<std::string, double> p1;
  for (const std::string& w : vocab) {
    auto it = kept[0].find(Ngram{w});
    const double c = it == kept[0].end() ? 0.0 : static_cast<double>(it->second);
    p1[w] = std::max(c - d, 0.0) / big_n + floor;
  }

  // Per-history totals and continuation type counts at each order >= 2.
  struct HistoryStats {
    uint64_t total = 0;
    size_t types = 0;
  };
  std::vector<std::map<Ngram, HistoryStats>> hist(static_cast<size_t>(order));
  for (size_t n = 1; n < static_cast<size_t>(order); ++n) {
    for (const auto& [g, c] : kept[n]) {
      HistoryStats& s = hist[n][Prefix(g)];
      s.total += c;
      ++s.types;
    }
  }

  // Interpolated probability of w after h, for any w.
  std::function<double(const Ngram&, const std::string&)> interp =
      [&](const Ngram& h, const std::string& w) -> double {
    if (h.empty()) return p1.at(w);
    const size_t n = h.size();
    const double lower = interp(Suffix(h), w);
    auto hs = hist[n].find(h);
    if (hs == hist[n].end()) return lower;
    const double ch = static_cast<double>(hs->second.total);
    Ngram g = h;
    g.push_back(w);
    auto it = kept[n].find(g);
    const double c = it == kept[n].end() ? 0.0 : static_cast<double>(it->second);
    const double gamma = d * static_cast<double>(hs->second.types) / ch;
    return std::max(c - d, 0.0) / ch + gamma * lower;
  };

  for (const std::string& w : vocab) logprob[0][Ngram{w}] = std::log10(p1[w]);
  logprob[0][Ngram{std::string(kSentenceBegin)}] = kLogZero;
  for (size_t n = 1; n < static_cast<size_t>(order); ++n) {
    for (const auto& [g, c] : kept[n]) {
      logprob[n][g] = std::log10(interp(Prefix(g), g.back()));
    }
    for (const auto& [h, s] : hist[n]) {
      const double gamma = d * static_cast<double>(s.types) /
                           static_cast<double>(s.total);
      backoff[n - 1][h] = std::log10(gamma);
    }
  }
  return model;
}

double SentenceLogProb(const NgramModel& model,
                       const std::vector<std::string>& tokens) {
  Ngram history{std::string(kSentenceBegin)};
  double sum = 0;
  for (const std::string& t : tokens) {
    sum += model.LogProb(history, t);
    history.push_back(model.Map(t));
  }
  sum += model.LogProb(history, std::string(kSentenceEnd));
  return sum;
}

double Perplexity(const NgramModel& model,
                  const std::vector<std::vector<std::string>>& sentences) {
  if (sentences.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "perplexity needs test sentences");
  }
  double sum = 0;
  size_t n = 0;
  for (const auto& s : sentences) {
    sum += SentenceLogProb(model, s);
    n += s.size() + 1;
  }
  return std::pow(10.0, -sum / static_cast<double>(n));
}

std::string ToArpa(const NgramModel& model) {
  const auto& lp = model.logprob();
  const auto& bo = model.backoff();
  std::string out = "\n\\data\\\n";
  for (size_t n = 0; n < lp.size(); ++n) {
    out += fmt::format("ngram {}={}\n", n + 1, lp[n].size());
  }
  for (size_t n = 0; n < lp.size(); ++n) {
    out += fmt::format("\n\\{}-grams:\n", n + 1);
    for (const auto& [g, p] : lp[n]) {
      out += fmt::format("{:.10f}\t{}", p, JoinNgram(g));
      if (n < bo.size()) {
        auto it = bo[n].find(g);
        if (it != bo[n].end()) out += fmt::format("\t{:.10f}", it->second);
      }
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  return out;
}

void ArpaExport(const NgramModel& model, const std::string& path) {
  WriteFile(path, ToArpa(model));
}

NgramModel ParseArpa(std::istream& in, const std::string& source_name) {
  std::string line;
  size_t line_no = 0;
  auto bad = [&](const std::string& what) {
    throw Error(ErrorKind::kMalformedFile,
                fmt::format("{}:{}: {}", source_name, line_no, what));
  };
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      line = TrimAscii(line);
      if (!line.empty()) return true;
    }
    return false;
  };
  auto parse_double = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
      bad("bad number '" + s + "'");
    }
    return v;
  };

  if (!next() || line != "\\data\\") bad("expected \\data\\");
  std::vector<size_t> declared;
  bool have = next();
  while (have && line.rfind("ngram ", 0) == 0) {
    const size_t eq = line.find('=');
    if (eq == std::string::npos) bad("expected ngram N=count");
    const int n = std::atoi(line.substr(6, eq - 6).c_str());
    if (n != static_cast<int>(declared.size()) + 1) bad("ngram orders out of sequence");
    char* end = nullptr;
    const std::string count = line.substr(eq + 1);
    const unsigned long long c = std::strtoull(count.c_str(), &end, 10);
    if (end == count.c_str() || *end != '\0') bad("bad ngram count");
    declared.push_back(c);
    have = next();
  }
  if (declared.empty()) bad("no ngram counts in \\data\\ section");

  const int order = static_cast<int>(declared.size());
  NgramModel model = NgramModelBuilder::Make(order, {});
  auto& logprob = NgramModelBuilder::logprob(model);
  auto& backoff = NgramModelBuilder::backoff(model);
  std::set<std::string> vocab;

  for (int n = 1; n <= order; ++n) {
    if (!have || line != fmt::format("\\{}-grams:", n)) {
      bad(fmt::format("expected \\{}-grams:", n));
    }
    size_t seen = 0;
    while ((have = next()) && line[0] != '\\') {
      std::vector<std::string> f;
      std::istringstream fields(line);
      for (std::string s; fields >> s;) f.push_back(s);
      const size_t nn = static_cast<size_t>(n);
      if (f.size() != nn + 1 && f.size() != nn + 2) {
        bad(fmt::format("expected {} or {} fields, got {}", nn + 1, nn + 2,
                        f.size()));
      }
      const double p = parse_double(f[0]);
      Ngram g(f.begin() + 1, f.begin() + 1 + n);
      if (!logprob[nn - 1].emplace(g, p).second) {
        bad("duplicate n-gram " + JoinNgram(g));
      }
      if (f.size() == nn + 2) {
        if (n == order) bad("back-off weight on a highest-order n-gram");
        backoff[nn - 1][g] = parse_double(f.back());
      }
      if (n == 1) vocab.insert(g[0]);
      ++seen;
    }
    if (seen != declared[n - 1]) {
      bad(fmt::format("{}-gram section has {} entries, header says {}", n, seen,
                      declared[n - 1]));
    }
  }
  if (!have || line != "\\end\\") bad("expected \\end\\");
  NgramModel result = NgramModelBuilder::Make(order, std::move(vocab));
  NgramModelBuilder::logprob(result) = std::move(logprob);
  NgramModelBuilder::backoff(result) = std::move(backoff);
  return result;
}

NgramModel ArpaImport(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  return ParseArpa(in, path);
}

}  // namespace ckb
