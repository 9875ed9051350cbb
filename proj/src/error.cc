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

#include "ckb/error.h"

#include <fmt/format.h>

namespace ckb {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidEncoding: return "invalid-encoding";
    case ErrorKind::kUnknownGrapheme: return "unknown-grapheme";
    case ErrorKind::kUnknownLetter: return "unknown-letter";
    case ErrorKind::kUnknownPhoneme: return "unknown-phoneme";
    case ErrorKind::kRuleConflict: return "rule-conflict";
    case ErrorKind::kFixedPointCap: return "fixed-point-cap";
    case ErrorKind::kInvalidRule: return "invalid-rule";
    case ErrorKind::kNoCandidate: return "no-candidate";
    case ErrorKind::kEmptyDistribution: return "empty-distribution";
    case ErrorKind::kEmptyPool: return "empty-pool";
    case ErrorKind::kEmptyGroup: return "empty-group";
    case ErrorKind::kDegenerateCounts: return "degenerate-counts";
    case ErrorKind::kMalformedFile: return "malformed-file";
    case ErrorKind::kMalformedName: return "malformed-name";
    case ErrorKind::kDuplicateUtterance: return "duplicate-utterance";
    case ErrorKind::kMissingAudioPath: return "missing-audio-path";
    case ErrorKind::kEmptyReference: return "empty-reference";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(fmt::format("{}: {}", ErrorKindName(kind), message)),
      kind_(kind) {}

}  // namespace ckb
