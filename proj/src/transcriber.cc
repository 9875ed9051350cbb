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

#include "ckb/transcriber.h"

#include "ckb/error.h"

namespace ckb {

Transcriber::Transcriber(const G2p& g2p, const RuleTable& rules,
                         const CorrectionTable& corrections,
                         NormalizerOptions options)
    : g2p_(&g2p), rules_(&rules), corrections_(&corrections),
      options_(options) {}

std::string Transcriber::StandardWord(const std::string& word) const {
  auto it = standard_cache_.find(word);
  if (it != standard_cache_.end()) return it->second;
  std::string standard = rules_->Standardize(corrections_->Lookup(word));
  standard_cache_.emplace(word, standard);
  return standard;
}

const PhoneSeq* Transcriber::WordPhones(const std::string& standard_word) const {
  auto it = phone_cache_.find(standard_word);
  if (it == phone_cache_.end()) {
    std::optional<PhoneSeq> phones;
    try {
      phones = g2p_->Convert(standard_word);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUnknownGrapheme &&
          e.kind() != ErrorKind::kNoCandidate) {
        throw;
      }
    }
    it = phone_cache_.emplace(standard_word, std::move(phones)).first;
  }
  return it->second ? &*it->second : nullptr;
}

TokenStream Transcriber::Normalize(std::string_view raw_text) const {
  TokenStream stream =
      Tokenize(NormalizeUnicode(raw_text, g2p_->script(), options_));
  for (TokenItem& item : stream.items) {
    if (!item.is_pause) item.text = StandardWord(item.text);
  }
  return stream;
}

Transcription Transcriber::Transcribe(std::string_view raw_text) const {
  Transcription out;
  TokenStream stream = Normalize(raw_text);
  for (const TokenItem& item : stream.items) {
    if (item.is_pause) {
      out.phones.push_back({true, {}});
      continue;
    }
    out.words.push_back(item.text);
    if (const PhoneSeq* phones = WordPhones(item.text)) {
      out.phones.push_back({false, *phones});
    } else {
      out.phones.push_back({true, {}});
      out.unconvertible.push_back(item.text);
    }
  }
  out.normalized = stream.Render();
  return out;
}

}  // namespace ckb
