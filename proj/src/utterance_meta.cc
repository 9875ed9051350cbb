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

#include "ckb/utterance_meta.h"

#include <fmt/format.h>

#include "ckb/error.h"

namespace ckb {

std::string UtteranceMeta::Render() const {
  if (sentence_id < 0 || sentence_id > kMaxSentenceId) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("sentence id {} outside 000-{}", sentence_id,
                            kMaxSentenceId));
  }
  if (speaker_id < 0 || speaker_id > kMaxSpeakerId) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("speaker id {} outside 000-{}", speaker_id,
                            kMaxSpeakerId));
  }
  return fmt::format("{}{}{}{:03d}{:03d}", gender == Gender::kFemale ? 'F' : 'M',
                     static_cast<int>(device), static_cast<int>(mic),
                     sentence_id, speaker_id);
}

std::string UtteranceMeta::Speaker() const {
  return fmt::format("{:03d}", speaker_id);
}

std::string FileStem(std::string_view path) {
  const size_t slash = path.find_last_of('/');
  if (slash != std::string_view::npos) path.remove_prefix(slash + 1);
  const size_t dot = path.find_last_of('.');
  if (dot != std::string_view::npos && dot > 0) path = path.substr(0, dot);
  return std::string(path);
}

UtteranceMeta ParseUtteranceFilename(std::string_view name) {
  const std::string stem = FileStem(name);
  auto bad = [&](size_t pos, const std::string& what) {
    throw Error(ErrorKind::kMalformedName,
                fmt::format("'{}' position {}: {}", stem, pos + 1, what));
  };
  if (stem.size() != kStemLength) {
    throw Error(ErrorKind::kMalformedName,
                fmt::format("'{}': stem has {} characters, expected {}", stem,
                            stem.size(), kStemLength));
  }
  auto digits = [&](size_t pos, size_t n) {
    int value = 0;
    for (size_t i = pos; i < pos + n; ++i) {
      if (stem[i] < '0' || stem[i] > '9') {
        bad(i, fmt::format("expected a digit, found '{}'", stem[i]));
      }
      value = value * 10 + (stem[i] - '0');
    }
    return value;
  };
  UtteranceMeta meta;
  if (stem[0] == 'F') {
    meta.gender = Gender::kFemale;
  } else if (stem[0] == 'M') {
    meta.gender = Gender::kMale;
  } else {
    bad(0, fmt::format("gender must be F or M, found '{}'", stem[0]));
  }
  if (stem[1] != '0' && stem[1] != '1') {
    bad(1, fmt::format("device must be 0 or 1, found '{}'", stem[1]));
  }
  meta.device = static_cast<Device>(stem[1] - '0');
  if (stem[2] != '0' && stem[2] != '1') {
    bad(2, fmt::format("microphone must be 0 or 1, found '{}'", stem[2]));
  }
  meta.mic = static_cast<Microphone>(stem[2] - '0');
  meta.sentence_id = digits(3, 3);
  if (meta.sentence_id > kMaxSentenceId) {
    bad(3, fmt::format("sentence id {} exceeds {}", meta.sentence_id,
                       kMaxSentenceId));
  }
  meta.speaker_id = digits(6, 3);
  return meta;
}

}  // namespace ckb
