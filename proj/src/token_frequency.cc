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

#include "ckb/token_frequency.h"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <map>

#include <fmt/format.h>

#include "ckb/error.h"
#include "ckb/text_util.h"

namespace ckb {

void SortByFrequency(std::vector<TokenFrequency>& table) {
  std::sort(table.begin(), table.end(),
            [](const TokenFrequency& a, const TokenFrequency& b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.token < b.token;
            });
}

namespace {

std::vector<TokenFrequency> FromMap(const std::map<std::string, uint64_t>& m) {
  std::vector<TokenFrequency> table;
  table.reserve(m.size());
  for (const auto& [token, n] : m) table.push_back({token, n});
  SortByFrequency(table);
  return table;
}

}  // namespace

std::vector<TokenFrequency> CountTokens(
    const std::vector<std::vector<std::string>>& sentences) {
  std::map<std::string, uint64_t> counts;
  for (const auto& sentence : sentences) {
    for (const std::string& token : sentence) ++counts[token];
  }
  return FromMap(counts);
}

std::vector<TokenFrequency> ParseFrequencyTable(std::istream& in,
                                                const std::string& source_name) {
  std::map<std::string, uint64_t> counts;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    const auto f = SplitTabs(line);
    char* end = nullptr;
    const unsigned long long n =
        f.size() == 2 ? std::strtoull(f[1].c_str(), &end, 10) : 0;
    if (f.size() != 2 || f[0].empty() || end == f[1].c_str() || *end != '\0') {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: expected token<TAB>count", source_name,
                              line_no));
    }
    counts[f[0]] += n;
  }
  return FromMap(counts);
}

std::string FormatFrequencyTable(const std::vector<TokenFrequency>& table) {
  std::string out;
  for (const TokenFrequency& t : table) {
    out += fmt::format("{}\t{}\n", t.token, t.frequency);
  }
  return out;
}

}  // namespace ckb
