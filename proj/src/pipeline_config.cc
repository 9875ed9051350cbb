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

#include "ckb/pipeline_config.h"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "ckb/error.h"
#include "ckb/script_model.h"
#include "ckb/text_util.h"

namespace ckb {

namespace {

const std::vector<std::string> kPathKeys = {
    "script", "rules", "constraints", "corrections", "variant_groups",
    "overrides"};

uint64_t ParseUnsigned(std::string_view key, std::string_view value) {
  const std::string s(value);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end == s.c_str() || *end != '\0' || s[0] == '-') {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("{}: expected a non-negative integer, got '{}'", key,
                            value));
  }
  return v;
}

double ParseDouble(std::string_view key, std::string_view value) {
  const std::string s(value);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end == s.c_str() || *end != '\0') {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("{}: expected a number, got '{}'", key, value));
  }
  return v;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorKind::kInvalidArgument,
              fmt::format("{}: expected true or false, got '{}'", key, value));
}

std::string EnvName(const std::string& key) {
  std::string name = "CKB_";
  for (char c : key) {
    name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

}  // namespace

const std::vector<std::string>& PipelineConfig::Keys() {
  static const std::vector<std::string> kKeys = {
      "data_dir",       "script",       "rules",
      "constraints",    "corrections",  "variant_groups",
      "overrides",      "lexicon_k",    "lm_discount",
      "lm_min_count",   "design_epsilon", "design_max_sentences",
      "top_n",          "merge_ix",     "g2p_cap",
      "g2p_beam"};
  return kKeys;
}

void PipelineConfig::Set(std::string_view key, std::string_view value) {
  const std::string v(value);
  if (key == "data_dir") {
    data_dir = v;
  } else if (key == "script") {
    script = v;
  } else if (key == "rules") {
    rules = v;
  } else if (key == "constraints") {
    constraints = v;
  } else if (key == "corrections") {
    corrections = v;
  } else if (key == "variant_groups") {
    variant_groups = v;
  } else if (key == "overrides") {
    overrides = v;
  } else if (key == "lexicon_k") {
    lexicon_k = ParseUnsigned(key, value);
    if (lexicon_k == 0) {
      throw Error(ErrorKind::kInvalidArgument, "lexicon_k must be at least 1");
    }
  } else if (key == "lm_discount") {
    lm_discount = ParseDouble(key, value);
    if (!(lm_discount > 0 && lm_discount < 1)) {
      throw Error(ErrorKind::kInvalidArgument, "lm_discount must be in (0, 1)");
    }
  } else if (key == "lm_min_count") {
    lm_min_count = ParseUnsigned(key, value);
  } else if (key == "design_epsilon") {
    design_epsilon = ParseDouble(key, value);
    if (!(design_epsilon >= 0)) {
      throw Error(ErrorKind::kInvalidArgument, "design_epsilon must be >= 0");
    }
  } else if (key == "design_max_sentences") {
    design_max_sentences = ParseUnsigned(key, value);
  } else if (key == "top_n") {
    top_n = ParseUnsigned(key, value);
    if (top_n == 0) throw Error(ErrorKind::kInvalidArgument, "top_n must be >= 1");
  } else if (key == "merge_ix") {
    merge_ix = ParseBool(key, value);
  } else if (key == "g2p_cap") {
    g2p_cap = ParseUnsigned(key, value);
  } else if (key == "g2p_beam") {
    g2p_beam = ParseUnsigned(key, value);
  } else {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("unknown config key '{}'", key));
  }
}

std::string PipelineConfig::Get(std::string_view key) const {
  if (key == "data_dir") return data_dir;
  if (key == "script") return script;
  if (key == "rules") return rules;
  if (key == "constraints") return constraints;
  if (key == "corrections") return corrections;
  if (key == "variant_groups") return variant_groups;
  if (key == "overrides") return overrides;
  if (key == "lexicon_k") return fmt::format("{}", lexicon_k);
  if (key == "lm_discount") return fmt::format("{}", lm_discount);
  if (key == "lm_min_count") return fmt::format("{}", lm_min_count);
  if (key == "design_epsilon") return fmt::format("{}", design_epsilon);
  if (key == "design_max_sentences") return fmt::format("{}", design_max_sentences);
  if (key == "top_n") return fmt::format("{}", top_n);
  if (key == "merge_ix") return merge_ix ? "true" : "false";
  if (key == "g2p_cap") return fmt::format("{}", g2p_cap);
  if (key == "g2p_beam") return fmt::format("{}", g2p_beam);
  throw Error(ErrorKind::kInvalidArgument,
              fmt::format("unknown config key '{}'", key));
}

PipelineConfig PipelineConfig::Parse(std::istream& in,
                                     const std::string& source_name) {
  PipelineConfig config;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: expected key = value", source_name, line_no));
    }
    try {
      config.Set(TrimAscii(line.substr(0, eq)), TrimAscii(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: {}", source_name, line_no, e.what()));
    }
  }
  return config;
}

PipelineConfig PipelineConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config " + path);
  return Parse(in, path);
}

void PipelineConfig::ApplyEnvironment() {
  for (const std::string& key : Keys()) {
    if (const char* value = std::getenv(EnvName(key).c_str())) {
      Set(key, value);
    }
  }
}

std::string PipelineConfig::Serialize() const {
  std::string out;
  for (const std::string& key : Keys()) {
    out += fmt::format("{} = {}\n", key, Get(key));
  }
  return out;
}

std::string PipelineConfig::ResolvePath(std::string_view key) const {
  const std::string value = Get(key);
  if (value.empty()) return value;
  const std::filesystem::path p(value);
  if (p.is_absolute()) return value;
  const std::string dir =
      data_dir.empty() ? ScriptModel::DefaultDataDir() : data_dir;
  return (std::filesystem::path(dir) / p).string();
}

uint64_t PipelineConfig::Hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::string_view bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const std::string& key : Keys()) {
    if (key == "data_dir") continue;
    feed(fmt::format("{} = {}\n", key, Get(key)));
  }
  for (const std::string& key : kPathKeys) {
    const std::string path = ResolvePath(key);
    if (path.empty()) continue;
    feed("\n" + key + "\n");
    feed(ReadFile(path));
  }
  return h;
}

std::string PipelineConfig::HashHex() const {
  return fmt::format("{:016x}", Hash());
}

}  // namespace ckb
