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

// Pipeline configuration: a `key = value` file whose keys may be overridden
// by CKB_<KEY> environment variables, plus the content hash stamped on
// every artifact.

#ifndef CKB_PIPELINE_CONFIG_H_
#define CKB_PIPELINE_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ckb {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct PipelineConfig {
  // Relative table paths resolve against data_dir; empty means the built-in
  // data directory.
  std::string data_dir;
  std::string script = "sorani_script.tsv";
  std::string rules = "standardization_rules.tsv";
  std::string constraints = "constraints.tsv";
  std::string corrections = "corrections.tsv";
  std::string variant_groups = "variant_groups.tsv";
  std::string overrides;
  uint64_t lexicon_k = 100000;
  double lm_discount = 0.7;
  uint64_t lm_min_count = 1;
  double design_epsilon = 1e-4;
  uint64_t design_max_sentences = 700;
  uint64_t top_n = 20;
  bool merge_ix = false;
  uint64_t g2p_cap = 4096;
  uint64_t g2p_beam = 512;

  static const std::vector<std::string>& Keys();

  // Throws Error(kInvalidArgument) for unknown keys or bad values.
  void Set(std::string_view key, std::string_view value);
  std::string Get(std::string_view key) const;

  // Throws Error(kMalformedFile) with line numbers.
  static PipelineConfig Parse(std::istream& in, const std::string& source_name);
  static PipelineConfig Load(const std::string& path);

  // Applies CKB_<KEY> variables, e.g. CKB_LM_DISCOUNT.
  void ApplyEnvironment();

  // Every key in Keys() order as `key = value` lines.
  std::string Serialize() const;

  // Resolved path of a table key; empty if the key is unset.
  std::string ResolvePath(std::string_view key) const;

  // FNV-1a 64 over the serialized settings (data_dir excluded) and the
  // contents of every referenced table.
  uint64_t Hash() const;
  std::string HashHex() const;
};

}  // namespace ckb

#endif  // CKB_PIPELINE_CONFIG_H_
