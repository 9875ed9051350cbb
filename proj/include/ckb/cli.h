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

// The `ckb` command line: subcommands normalize, g2p, stats, design,
// lexicon, lm, score and kaldi-prep over the library modules.

#ifndef CKB_CLI_H_
#define CKB_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace ckb {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsageError = 2;

// args[0] is the program name. Output without an --output path goes to
// `out`; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace ckb

#endif  // CKB_CLI_H_
