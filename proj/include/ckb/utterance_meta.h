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

// Recording filename codec. A stem is nine characters: gender (F/M),
// device (0 laptop, 1 PC), microphone (0 USB, 1 jack), a three-digit
// sentence id (000-699) and a three-digit speaker id.

#ifndef CKB_UTTERANCE_META_H_
#define CKB_UTTERANCE_META_H_

#include <string>
#include <string_view>

namespace ckb {

enum class Gender { kFemale, kMale };
enum class Device { kLaptop = 0, kPc = 1 };
enum class Microphone { kUsb = 0, kJack = 1 };

inline constexpr int kMaxSentenceId = 699;
inline constexpr int kMaxSpeakerId = 999;
inline constexpr size_t kStemLength = 9;

struct UtteranceMeta {
  Gender gender = Gender::kFemale;
  Device device = Device::kLaptop;
  Microphone mic = Microphone::kUsb;
  int sentence_id = 0;
  int speaker_id = 0;

  // The nine-character stem. Throws Error(kInvalidArgument) for ids out of
  // range.
  std::string Render() const;
  // Three-digit speaker id.
  std::string Speaker() const;

  friend bool operator==(const UtteranceMeta&, const UtteranceMeta&) = default;
};

// Accepts a bare stem or a path; the directory and one extension are
// stripped. Throws Error(kMalformedName) naming the offending position.
UtteranceMeta ParseUtteranceFilename(std::string_view name);

// Directory and extension removed.
std::string FileStem(std::string_view path);

}  // namespace ckb

#endif  // CKB_UTTERANCE_META_H_
