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

// Text to phone-stream transcription: Unicode normalization, correction
// lookup, script standardization, then G2P per word. Punctuation becomes a
// pause; words G2P cannot convert (digits, Latin) also become pauses and are
// recorded.

#ifndef CKB_TRANSCRIBER_H_
#define CKB_TRANSCRIBER_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckb/diphone_stats.h"
#include "ckb/g2p.h"
#include "ckb/normalizer.h"

namespace ckb {

struct Transcription {
  std::string normalized;          // rendered token stream after standardizing
  std::vector<std::string> words;  // standardized words, in order
  PhoneStream phones;
  std::vector<std::string> unconvertible;
};

class Transcriber {
 public:
  // The tables are borrowed and must outlive the transcriber.
  Transcriber(const G2p& g2p, const RuleTable& rules,
              const CorrectionTable& corrections,
              NormalizerOptions options = {});

  Transcription Transcribe(std::string_view raw_text) const;
  // Normalized token stream with corrected, standardized words; no G2P.
  TokenStream Normalize(std::string_view raw_text) const;

  // Corrected and standardized form of one normalized word.
  std::string StandardWord(const std::string& word) const;
  // nullptr if the word cannot be converted.
  const PhoneSeq* WordPhones(const std::string& standard_word) const;

  const G2p& g2p() const { return *g2p_; }

 private:
  const G2p* g2p_;
  const RuleTable* rules_;
  const CorrectionTable* corrections_;
  NormalizerOptions options_;
  mutable std::map<std::string, std::string> standard_cache_;
  mutable std::map<std::string, std::optional<PhoneSeq>> phone_cache_;
};

}  // namespace ckb

#endif  // CKB_TRANSCRIBER_H_
