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

#ifndef CKB_ERROR_H_
#define CKB_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ckb {

enum class ErrorKind {
  kInvalidEncoding,
  kUnknownGrapheme,
  kUnknownLetter,
  kUnknownPhoneme,
  kRuleConflict,
  kFixedPointCap,
  kInvalidRule,
  kNoCandidate,
  kEmptyDistribution,
  kEmptyPool,
  kEmptyGroup,
  kDegenerateCounts,
  kMalformedFile,
  kMalformedName,
  kDuplicateUtterance,
  kMissingAudioPath,
  kEmptyReference,
  kIo,
  kInvalidArgument,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this exception. The kind is
// stable and machine readable; what() carries the human diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ckb

#endif  // CKB_ERROR_H_
