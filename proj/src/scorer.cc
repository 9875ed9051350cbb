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

#include "ckb/scorer.h"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "ckb/error.h"

namespace ckb {

char EditOpSymbol(EditOp op) {
  switch (op) {
    case EditOp::kHit: return '=';
    case EditOp::kSubstitution: return 'S';
    case EditOp::kDeletion: return 'D';
    case EditOp::kInsertion: return 'I';
  }
  return '?';
}

double AlignmentResult::ErrorRate() const {
  if (ref_len == 0) {
    throw Error(ErrorKind::kEmptyReference, "reference is empty");
  }
  return 100.0 * errors() / ref_len;
}

AlignmentResult Align(const std::vector<std::string>& ref,
                      const std::vector<std::string>& hyp) {
  const size_t n = ref.size();
  const size_t m = hyp.size();
  std::vector<int> dist((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> int& { return dist[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const int diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  AlignmentResult r;
  r.ref_len = static_cast<int>(n);
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const int here = at(i, j);
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && here == at(i - 1, j - 1)) {
      r.ops.push_back(EditOp::kHit);
      ++r.hits;
      --i;
      --j;
    } else if (i > 0 && j > 0 && here == at(i - 1, j - 1) + 1) {
      r.ops.push_back(EditOp::kSubstitution);
      ++r.substitutions;
      --i;
      --j;
    } else if (i > 0 && here == at(i - 1, j) + 1) {
      r.ops.push_back(EditOp::kDeletion);
      ++r.deletions;
      --i;
    } else {
      r.ops.push_back(EditOp::kInsertion);
      ++r.insertions;
      --j;
    }
  }
  std::reverse(r.ops.begin(), r.ops.end());
  return r;
}

ErrorRate ScorePairs(const std::vector<TokenPair>& pairs) {
  ErrorRate rate;
  double rate_sum = 0;
  size_t rated = 0;
  for (const auto& [ref, hyp] : pairs) {
    const AlignmentResult a = Align(ref, hyp);
    rate.errors += static_cast<uint64_t>(a.errors());
    rate.ref_len += static_cast<uint64_t>(a.ref_len);
    if (a.ref_len > 0) {
      rate_sum += a.ErrorRate();
      ++rated;
    }
  }
  rate.utterances = pairs.size();
  if (rate.ref_len == 0) {
    throw Error(ErrorKind::kEmptyReference, "total reference length is zero");
  }
  rate.pooled = 100.0 * static_cast<double>(rate.errors) /
                static_cast<double>(rate.ref_len);
  rate.utterance_mean = rate_sum / static_cast<double>(rated);
  return rate;
}

double Wer(const std::vector<TokenPair>& pairs) { return ScorePairs(pairs).pooled; }
double Per(const std::vector<TokenPair>& pairs) { return ScorePairs(pairs).pooled; }

std::string FormatRate(double percent) { return fmt::format("{:.1f}", percent); }

const std::vector<std::string>& TopicOrder() {
  static const std::vector<std::string> kTopics = {
      "General", "Religious", "Sport",        "Politics",
      "Economics", "Social",  "Novel",        "Letter",
      "Conversation", "Scientific/Technology", "Poet", "Other"};
  return kTopics;
}

std::optional<std::string> CanonicalTopic(std::string_view label) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };
  const std::string key = lower(label);
  for (const std::string& t : TopicOrder()) {
    if (lower(t) == key) return t;
  }
  return std::nullopt;
}

std::optional<double> TopicRow::Wer() const {
  if (ref_words == 0) return std::nullopt;
  return 100.0 * static_cast<double>(word_errors) / static_cast<double>(ref_words);
}

std::optional<double> TopicRow::Per() const {
  if (ref_phones == 0) return std::nullopt;
  return 100.0 * static_cast<double>(phone_errors) /
         static_cast<double>(ref_phones);
}

TopicReport PerTopicReport(const std::vector<ScoredUtterance>& utterances) {
  TopicReport report;
  for (const std::string& t : TopicOrder()) report.rows.push_back({t});
  report.overall.topic = "Overall";
  double wer_sum = 0, per_sum = 0;
  size_t wer_n = 0, per_n = 0;
  for (const ScoredUtterance& u : utterances) {
    std::optional<std::string> topic = CanonicalTopic(u.topic);
    if (!topic) {
      report.warnings.push_back(
          fmt::format("{}: unknown topic '{}' scored as Other", u.utt_id, u.topic));
      topic = "Other";
    }
    const size_t idx = static_cast<size_t>(
        std::find(TopicOrder().begin(), TopicOrder().end(), *topic) -
        TopicOrder().begin());
    const AlignmentResult w = Align(u.ref_words, u.hyp_words);
    const AlignmentResult p = Align(u.ref_phones, u.hyp_phones);
    for (TopicRow* row : {&report.rows[idx], &report.overall}) {
      ++row->utterances;
      row->ref_words += static_cast<uint64_t>(w.ref_len);
      row->word_errors += static_cast<uint64_t>(w.errors());
      row->ref_phones += static_cast<uint64_t>(p.ref_len);
      row->phone_errors += static_cast<uint64_t>(p.errors());
    }
    if (w.ref_len > 0) {
      wer_sum += w.ErrorRate();
      ++wer_n;
    }
    if (p.ref_len > 0) {
      per_sum += p.ErrorRate();
      ++per_n;
    }
  }
  if (wer_n > 0) report.wer_utterance_mean = wer_sum / static_cast<double>(wer_n);
  if (per_n > 0) report.per_utterance_mean = per_sum / static_cast<double>(per_n);
  return report;
}

std::string TopicReport::ToTsv() const {
  auto rate = [](std::optional<double> r) {
    return r ? FormatRate(*r) : std::string("NA");
  };
  std::string out;
  out += "metric\tpooled\tutterance_mean\n";
  out += fmt::format("WER\t{}\t{}\n", rate(overall.Wer()),
                     overall.Wer() ? FormatRate(wer_utterance_mean) : "NA");
  out += fmt::format("PER\t{}\t{}\n", rate(overall.Per()),
                     overall.Per() ? FormatRate(per_utterance_mean) : "NA");
  out += "\ntopic\tutterances\tref_words\twer\tref_phones\tper\n";
  for (const TopicRow& row : rows) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", row.topic, row.utterances,
                       row.ref_words, rate(row.Wer()), row.ref_phones,
                       rate(row.Per()));
  }
  return out;
}

}  // namespace ckb
