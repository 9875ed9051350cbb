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

// Kaldi data directory emission: text, wav.scp, utt2spk and spk2utt, with
// utterance ids of the form <speaker>_<stem> so that sorting by utterance
// also sorts by speaker.

#ifndef CKB_KALDI_DATADIR_H_
#define CKB_KALDI_DATADIR_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ckb/utterance_meta.h"

namespace ckb {

struct ManifestEntry {
  std::string audio_path;
  UtteranceMeta meta;
  std::string transcript;           // normalized words, space separated
  std::optional<std::string> phones;  // space-separated, for .phn files
};

// `audio_path<TAB>transcript` lines; metadata comes from the file stem.
std::vector<ManifestEntry> ParseManifest(std::istream& in,
                                         const std::string& source_name);

std::string UtteranceId(const UtteranceMeta& meta);

struct KaldiFiles {
  std::string text;
  std::string wav_scp;
  std::string utt2spk;
  std::string spk2utt;
};

// Throws Error(kDuplicateUtterance) or Error(kMissingAudioPath).
KaldiFiles RenderKaldiDataDir(const std::vector<ManifestEntry>& manifest);

// Writes the four files into outdir (created if needed). Entries with
// phones also get phn/<utt_id>.phn. Returns the written paths.
std::vector<std::string> EmitKaldiDataDir(
    const std::vector<ManifestEntry>& manifest, const std::string& outdir);

}  // namespace ckb

#endif  // CKB_KALDI_DATADIR_H_
