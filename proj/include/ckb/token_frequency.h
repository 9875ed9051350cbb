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

// Token frequency tables: counting, reading and writing `token<TAB>count`.

#ifndef CKB_TOKEN_FREQUENCY_H_
#define CKB_TOKEN_FREQUENCY_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ckb {

struct TokenFrequency {
  std::string token;
  uint64_t frequency = 0;

  friend bool operator==(const TokenFrequency&, const TokenFrequency&) = default;
};

// Frequency descending, then token ascending.
void SortByFrequency(std::vector<TokenFrequency>& table);

// Counts word tokens over already tokenized sentences; output is sorted.
std::vector<TokenFrequency> CountTokens(
    const std::vector<std::vector<std::string>>& sentences);

// Duplicate tokens are summed. Throws Error(kMalformedFile).
std::vector<TokenFrequency> ParseFrequencyTable(std::istream& in,
                                                const std::string& source_name);
std::string FormatFrequencyTable(const std::vector<TokenFrequency>& table);

}  // namespace ckb

#endif  // CKB_TOKEN_FREQUENCY_H_
