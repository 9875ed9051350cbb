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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "ckb/cli.h"
#include "ckb/text_util.h"

namespace ckb::testing {

const ScriptModel& Script() {
  static const ScriptModel script = ScriptModel::Load(DataPath("sorani_script.tsv"));
  return script;
}

// Reference table, row by row.
const std::vector<ReferenceRow>& ReferenceInventory() {
  static const std::vector<ReferenceRow> rows = {
      {"b", "b", PhonemeCategory::kVoicedStop},
      {"d", "d", PhonemeCategory::kVoicedStop},
      {"je", "dʒ", PhonemeCategory::kVoicedStop},
      {"g", "g", PhonemeCategory::kVoicedStop},
      {"v", "v", PhonemeCategory::kVoicedFricative},
      {"z", "z", PhonemeCategory::kVoicedFricative},
      {"zh", "ʒ", PhonemeCategory::kVoicedFricative},
      {"xe", "ɣ", PhonemeCategory::kVoicedFricative},
      {"ah", "ʕ", PhonemeCategory::kVoicedFricative},
      {"t", "t", PhonemeCategory::kUnvoicedStop},
      {"ch", "tʃ", PhonemeCategory::kUnvoicedStop},
      {"k", "k", PhonemeCategory::kUnvoicedStop},
      {"p", "p", PhonemeCategory::kUnvoicedStop},
      {"q", "q", PhonemeCategory::kUnvoicedStop},
      {"eh", "ʔ", PhonemeCategory::kUnvoicedStop},
      {"h", "h", PhonemeCategory::kUnvoicedFricative},
      {"s", "s", PhonemeCategory::kUnvoicedFricative},
      {"sh", "ʃ", PhonemeCategory::kUnvoicedFricative},
      {"f", "f", PhonemeCategory::kUnvoicedFricative},
      {"x", "x", PhonemeCategory::kUnvoicedFricative},
      {"he", "ħ", PhonemeCategory::kVibrant},
      {"r", "ɾ", PhonemeCategory::kFlap},
      {"rr", "r", PhonemeCategory::kTrill},
      {"l", "l", PhonemeCategory::kLateral},
      {"ll", "ɫ", PhonemeCategory::kLateral},
      {"m", "m", PhonemeCategory::kNasal},
      {"n", "n", PhonemeCategory::kNasal},
      {"y", "j", PhonemeCategory::kApproximant},
      {"w", "w", PhonemeCategory::kApproximant},
      {"i", "i", PhonemeCategory::kVowel},
      {"aa", "ä", PhonemeCategory::kVowel},
      {"e", "ε", PhonemeCategory::kVowel},
      {"o", "o", PhonemeCategory::kVowel},
      {"u", "ʊ", PhonemeCategory::kVowel},
      {"uu", "u", PhonemeCategory::kVowel},
      {"a", "a", PhonemeCategory::kVowel},
      {"ix", "ɪ", PhonemeCategory::kVowel},
  };
  return rows;
}

std::vector<TokenFrequency> SyntheticVocabulary(size_t n, uint32_t seed) {
  std::mt19937 rng(seed);
  const std::vector<std::string> letters = {"ب", "د", "ر", "ڕ", "س", "ک", "ل", "م", "ن", "ت",
                                            "ا", "ە", "ێ", "ۆ", "ی", "و", "ڵ", "ش", "گ"};
  const std::vector<std::string> fixed = {"دەس", "دەست", "سلاو", "سڵاو", "ئەکەوم", "دەکەوم",
                                          "کۆلتور", "کەلتور", "کلتور", "x1", "2020"};
  std::set<std::string> seen;
  std::vector<TokenFrequency> vocab;
  for (const std::string& f : fixed) {
    seen.insert(f);
    vocab.push_back({f, 1 + rng() % 500});
  }
  while (vocab.size() < n) {
    std::string w;
    const size_t len = 1 + rng() % 7;
    for (size_t i = 0; i < len; ++i) w += letters[rng() % letters.size()];
    if (seen.insert(w).second) vocab.push_back({w, 1 + rng() % 5000});
  }
  return vocab;
}

std::string DataPath(const std::string& name) {
  return std::string(CKB_SOURCE_DIR) + "/data/" + name;
}

std::string TestDataPath(const std::string& name) {
  return std::string(CKB_SOURCE_DIR) + "/tests/data/" + name;
}

std::string GoldenPath(const std::string& name) {
  return std::string(CKB_SOURCE_DIR) + "/tests/golden/" + name;
}

std::string MakeTempDir(const std::string& prefix) {
  namespace fs = std::filesystem;
  std::string pattern = (fs::temp_directory_path() / (prefix + "-XXXXXX")).string();
  if (mkdtemp(pattern.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed for " + pattern);
  }
  return pattern;
}

namespace {

int OracleSonority(PhonemeCategory c) {
  switch (c) {
    case PhonemeCategory::kVoicedStop:
    case PhonemeCategory::kUnvoicedStop:
      return 0;
    case PhonemeCategory::kVoicedFricative:
    case PhonemeCategory::kUnvoicedFricative:
    case PhonemeCategory::kVibrant:
      return 1;
    case PhonemeCategory::kNasal:
      return 2;
    case PhonemeCategory::kFlap:
    case PhonemeCategory::kTrill:
    case PhonemeCategory::kLateral:
      return 3;
    case PhonemeCategory::kApproximant:
      return 4;
    case PhonemeCategory::kVowel:
      return 5;
  }
  return -1;
}

struct Reading {
  PhoneSeq phones;
  bool split = false;
};

}  // namespace

double OraclePenalty(const PhoneSeq& phones, int splits,
                     const ScriptModel& script, const ConstraintSet& w) {
  auto vowel = [&](const std::string& p) {
    return script.FindPhoneme(p)->category == PhonemeCategory::kVowel;
  };
  auto son = [&](const std::string& p) {
    return OracleSonority(script.FindPhoneme(p)->category);
  };
  const double res = w.weight(Constraint::kResidue);
  const double cx = w.weight(Constraint::kComplexOnset);
  const double hi = w.weight(Constraint::kHiatus);
  const double cs = w.weight(Constraint::kCodaSonority);
  double penalty = w.weight(Constraint::kDigraphSplit) * splits +
                   w.weight(Constraint::kEpenthesis) *
                       static_cast<double>(std::count(phones.begin(), phones.end(), "ix"));

  std::vector<size_t> nuclei;
  for (size_t i = 0; i < phones.size(); ++i) {
    if (vowel(phones[i])) nuclei.push_back(i);
  }
  if (nuclei.empty()) return penalty + res * static_cast<double>(phones.size());

  auto onset_cost = [&](size_t o) { return o == 0 ? hi : (o == 2 ? cx : 0.0); };
  auto coda_cost = [&](size_t first, size_t c) {
    return (c == 2 && son(phones[first]) <= son(phones[first + 1])) ? cs : 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();

  // Initial run.
  {
    const size_t k = nuclei.front();
    double best = inf;
    for (size_t o = 0; o <= std::min<size_t>(2, k); ++o) {
      best = std::min(best, onset_cost(o) + res * static_cast<double>(k - o));
    }
    penalty += best;
  }
  // Medial runs: coda takes the first c consonants, onset the last o.
  for (size_t s = 0; s + 1 < nuclei.size(); ++s) {
    const size_t first = nuclei[s] + 1;
    const size_t k = nuclei[s + 1] - first;
    double best = inf;
    for (size_t c = 0; c <= 2 && c <= k; ++c) {
      for (size_t o = 0; o <= 2 && c + o <= k; ++o) {
        best = std::min(best, coda_cost(first, c) + onset_cost(o) +
                                  res * static_cast<double>(k - c - o));
      }
    }
    penalty += best;
  }
  // Final run.
  {
    const size_t first = nuclei.back() + 1;
    const size_t k = phones.size() - first;
    double best = inf;
    for (size_t c = 0; c <= 2 && c <= k; ++c) {
      best = std::min(best, coda_cost(first, c) + res * static_cast<double>(k - c));
    }
    penalty += best;
  }
  return penalty;
}

OracleResult OracleG2p(const std::string& token, const ScriptModel& script,
                       const ConstraintSet& constraints) {
  const std::u32string cps = DecodeUtf8(token);
  std::map<std::u32string, const Grapheme*> letters;
  for (const Grapheme& g : script.Alphabet()) letters[g.codepoints] = &g;

  // Segmentation: a two-letter grapheme wins over its first letter.
  std::vector<const Grapheme*> units;
  for (size_t i = 0; i < cps.size();) {
    if (i + 1 < cps.size()) {
      auto it = letters.find(cps.substr(i, 2));
      if (it != letters.end()) {
        units.push_back(it->second);
        i += 2;
        continue;
      }
    }
    auto it = letters.find(cps.substr(i, 1));
    if (it == letters.end()) throw std::invalid_argument("non-Sorani letter");
    units.push_back(it->second);
    ++i;
  }

  auto is_vowel = [&](const std::string& p) { return script.IsVowel(p); };
  std::vector<std::vector<Reading>> readings;
  for (const Grapheme* g : units) {
    std::vector<Reading> r;
    for (const std::string& p : g->candidate_phonemes) r.push_back({{p}, false});
    if (g->codepoints.size() == 2) {
      const auto& half = letters.at(g->codepoints.substr(0, 1))->candidate_phonemes;
      for (const std::string& a : half) {
        for (const std::string& b : half) {
          if (is_vowel(a) != is_vowel(b)) r.push_back({{a, b}, true});
        }
      }
    }
    readings.push_back(std::move(r));
  }

  std::map<PhoneSeq, double> best_by_phones;
  size_t enumerated = 0;
  PhoneSeq base;
  std::function<void(size_t, int)> expand = [&](size_t u, int splits) {
    if (u == readings.size()) {
      std::vector<size_t> gaps;
      for (size_t j = 1; j < base.size(); ++j) {
        if (!is_vowel(base[j - 1]) && !is_vowel(base[j])) gaps.push_back(j);
      }
      for (uint64_t mask = 0; mask < (uint64_t{1} << gaps.size()); ++mask) {
        PhoneSeq full;
        size_t g = 0;
        for (size_t j = 0; j < base.size(); ++j) {
          if (g < gaps.size() && gaps[g] == j) {
            if (mask & (uint64_t{1} << g)) full.emplace_back("ix");
            ++g;
          }
          full.push_back(base[j]);
        }
        ++enumerated;
        const double p = OraclePenalty(full, splits, script, constraints);
        auto [it, inserted] = best_by_phones.emplace(full, p);
        if (!inserted) it->second = std::min(it->second, p);
      }
      return;
    }
    for (const Reading& r : readings[u]) {
      const size_t mark = base.size();
      base.insert(base.end(), r.phones.begin(), r.phones.end());
      expand(u + 1, splits + (r.split ? 1 : 0));
      base.resize(mark);
    }
  };
  expand(0, 0);

  OracleResult result;
  result.enumerated = enumerated;
  bool have = false;
  size_t best_ix = 0;
  for (const auto& [phones, p] : best_by_phones) {
    const size_t ix = static_cast<size_t>(std::count(phones.begin(), phones.end(), "ix"));
    const bool better = !have || p < result.penalty ||
                        (p == result.penalty &&
                         (ix < best_ix || (ix == best_ix && phones < result.phones)));
    if (better) {
      have = true;
      result.phones = phones;
      result.penalty = p;
      best_ix = ix;
    }
  }
  return result;
}

int OracleEditDistance(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  std::vector<std::vector<int>> memo(a.size() + 1,
                                     std::vector<int>(b.size() + 1, -1));
  std::function<int(size_t, size_t)> d = [&](size_t i, size_t j) -> int {
    if (i == 0) return static_cast<int>(j);
    if (j == 0) return static_cast<int>(i);
    int& m = memo[i][j];
    if (m >= 0) return m;
    m = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1,
                  d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return m;
  };
  return d(a.size(), b.size());
}

SubsetOptimum OracleBestSubset(const std::vector<DiphoneDistribution>& pool,
                               const DiphoneDistribution& target) {
  SubsetOptimum best;
  best.covered = 0;
  best.divergence = std::numeric_limits<double>::infinity();
  const size_t n = pool.size();
  for (uint64_t mask = 1; mask < (uint64_t{1} << n); ++mask) {
    std::map<Diphone, uint64_t> sum;
    uint64_t total = 0;
    for (size_t j = 0; j < n; ++j) {
      if (!(mask & (uint64_t{1} << j))) continue;
      for (const auto& [pair, c] : pool[j].counts()) {
        sum[pair] += c;
        total += c;
      }
    }
    size_t covered = 0;
    for (const auto& [pair, c] : target.counts()) {
      if (sum.count(pair)) ++covered;
    }
    std::set<Diphone> support;
    for (const auto& [pair, c] : sum) support.insert(pair);
    for (const auto& [pair, c] : target.counts()) support.insert(pair);
    double tv = 0;
    for (const Diphone& pair : support) {
      const double p = total == 0 ? 0.0
                                  : static_cast<double>(sum.count(pair) ? sum[pair] : 0) /
                                        static_cast<double>(total);
      const double q = static_cast<double>(target.count(pair)) /
                       static_cast<double>(target.total());
      tv += std::fabs(p - q);
    }
    tv *= 0.5;
    if (total == 0) tv = 1.0;
    if (covered > best.covered || (covered == best.covered && tv < best.divergence)) {
      best.covered = covered;
      best.divergence = tv;
    }
  }
  return best;
}

std::map<Diphone, uint64_t> OracleDiphones(const std::vector<PhoneSeq>& segments) {
  std::map<Diphone, uint64_t> counts;
  for (const PhoneSeq& s : segments) {
    for (size_t i = 1; i < s.size(); ++i) ++counts[{s[i - 1], s[i]}];
  }
  return counts;
}

DesignTrial RandomDesignTrial(std::mt19937& rng) {
  static const std::vector<std::string> phones = {"b", "d", "k", "s", "r", "aa", "a", "i"};
  auto pick = [&](size_t n) { return static_cast<size_t>(rng() % n); };
  DesignTrial trial;
  const size_t n = 1 + pick(12);
  std::vector<Diphone> seen;
  for (size_t i = 0; i < n; ++i) {
    PhoneStream stream;
    const size_t segments = 1 + pick(3);
    for (size_t s = 0; s < segments; ++s) {
      if (s > 0) stream.push_back({true, {}});
      PhoneSeq seg;
      const size_t len = 2 + pick(5);
      for (size_t j = 0; j < len; ++j) seg.push_back(phones[pick(phones.size())]);
      for (size_t j = 1; j < seg.size(); ++j) seen.emplace_back(seg[j - 1], seg[j]);
      stream.push_back({false, seg});
    }
    trial.pool.push_back(MakeCandidate(fmt::format("s{:02d}", i), "", stream, Script()));
  }
  const size_t pairs = 1 + pick(20);
  for (size_t attempt = 0; trial.target.counts().size() < pairs && attempt < 200; ++attempt) {
    const Diphone pair = pick(10) < 8 ? seen[pick(seen.size())]
                                      : Diphone{phones[pick(phones.size())],
                                                phones[pick(phones.size())]};
    trial.target.Add(pair, 1 + pick(10));
  }
  return trial;
}

std::vector<std::string> LoadFixtureLines(const std::string& path) {
  std::vector<std::string> lines;
  for (const std::string& line : ReadLines(path)) {
    if (!IsCommentOrBlank(line)) lines.push_back(line);
  }
  return lines;
}

std::vector<GoldReading> LoadYwGold() {
  std::vector<GoldReading> gold;
  for (const std::string& line : LoadFixtureLines(TestDataPath("yw_gold.tsv"))) {
    const auto fields = SplitTabs(line);
    if (fields.size() != 2) throw std::runtime_error("bad gold line: " + line);
    gold.push_back({fields[0], fields[1]});
  }
  return gold;
}

std::string AmbiguousReadings(const std::string& token, const G2p& g2p) {
  const auto units = g2p.script().Segment(DecodeUtf8(token));
  const PronunciationCandidate best = g2p.Best(token);
  std::vector<std::string> out;
  for (size_t u = 0; u < units.size(); ++u) {
    const Grapheme& g = *units[u].grapheme;
    if (g.candidate_phonemes.size() < 2 && !g.is_digraph()) continue;
    std::vector<std::string> phones;
    for (size_t j = 0; j < best.phones.size(); ++j) {
      if (best.provenance[j].unit == static_cast<int>(u)) phones.push_back(best.phones[j]);
    }
    out.push_back(Join(phones, "+"));
  }
  return Join(out, " ");
}

int RunDemoPipeline(const std::string& outdir, std::string* log) {
  const std::string demo = DataPath("demo/");
  const std::string o = outdir + "/";
  const std::vector<std::vector<std::string>> steps = {
      {"normalize", "-i", demo + "corpus.txt", "-o", o + "corpus.norm.txt"},
      {"g2p", "-i", o + "corpus.norm.txt", "-o", o + "corpus.g2p.tsv", "--skip-unknown"},
      {"stats", "-i", o + "corpus.norm.txt", "-o", o + "diphones.tsv", "--top-out",
       o + "diphones.top.tsv"},
      {"design", "--pool", demo + "pool.tsv", "--target-corpus", o + "corpus.norm.txt", "-o",
       o + "selection.tsv", "--report", o + "selection.report.tsv", "--suggest",
       o + "suggestions.tsv"},
      {"lexicon", "--corpus", o + "corpus.norm.txt", "-o", o + "lexicon.txt"},
      {"lm", "-i", o + "corpus.norm.txt", "-o", o + "lm.arpa", "--lexicon", o + "lexicon.txt",
       "--counts-out", o + "lm.counts.tsv", "--test", o + "corpus.norm.txt"},
      {"kaldi-prep", "-i", demo + "manifest.tsv", "-o", o + "kaldi", "--phn"},
      {"score", "-i", demo + "test.tsv", "-o", o + "score.tsv"},
  };
  for (const auto& step : steps) {
    std::vector<std::string> args = {"ckb"};
    args.insert(args.end(), step.begin(), step.end());
    std::ostringstream out;
    std::ostringstream err;
    const int status = RunCli(args, out, err);
    if (log != nullptr) *log += step[0] + ": " + out.str() + err.str();
    if (status != 0) return status;
  }
  return 0;
}

std::map<std::string, std::string> DirectoryContents(const std::string& dir) {
  namespace fs = std::filesystem;
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    files[fs::relative(entry.path(), dir).string()] = ReadFile(entry.path().string());
  }
  return files;
}

}  // namespace ckb::testing
