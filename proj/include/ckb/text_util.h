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

// Small text helpers shared by every module: UTF-8 transcoding, field
// splitting and whole-file I/O.

#ifndef CKB_TEXT_UTIL_H_
#define CKB_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace ckb {

// Throws Error(kInvalidEncoding) on malformed UTF-8.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view text);
std::string EncodeUtf8(char32_t codepoint);
bool IsValidUtf8(std::string_view text);

std::vector<std::string> SplitTabs(std::string_view line);
// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string> SplitSpaces(std::string_view line);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

std::string_view TrimAscii(std::string_view text);

// Lines without their terminators; a trailing CR is dropped.
std::vector<std::string> ReadLines(const std::string& path);
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view content);

// True for blank lines and lines whose first non-blank byte is '#'.
bool IsCommentOrBlank(std::string_view line);

}  // namespace ckb

#endif  // CKB_TEXT_UTIL_H_
