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

#include "ckb/kaldi_datadir.h"

#include <algorithm>
#include <filesystem>
#include <istream>
#include <map>

#include <fmt/format.h>

#include "ckb/error.h"
#include "ckb/text_util.h"

namespace ckb {

std::vector<ManifestEntry> ParseManifest(std::istream& in,
                                         const std::string& source_name) {
  std::vector<ManifestEntry> manifest;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    const auto f = SplitTabs(line);
    if (f.size() != 2) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: expected audio_path<TAB>transcript",
                              source_name, line_no));
    }
    ManifestEntry e;
    e.audio_path = TrimAscii(f[0]);
    if (e.audio_path.empty()) {
      throw Error(ErrorKind::kMissingAudioPath,
                  fmt::format("{}:{}: empty audio path", source_name, line_no));
    }
    try {
      e.meta = ParseUtteranceFilename(e.audio_path);
    } catch (const Error& err) {
      throw Error(ErrorKind::kMalformedName,
                  fmt::format("{}:{}: {}", source_name, line_no, err.what()));
    }
    e.transcript = f[1];
    manifest.push_back(std::move(e));
  }
  return manifest;
}

std::string UtteranceId(const UtteranceMeta& meta) {
  return meta.Speaker() + "_" + meta.Render();
}

KaldiFiles RenderKaldiDataDir(const std::vector<ManifestEntry>& manifest) {
  std::map<std::string, const ManifestEntry*> by_utt;
  for (const ManifestEntry& e : manifest) {
    if (TrimAscii(e.audio_path).empty()) {
      throw Error(ErrorKind::kMissingAudioPath,
                  "utterance " + UtteranceId(e.meta) + " has no audio path");
    }
    const std::string id = UtteranceId(e.meta);
    if (!by_utt.emplace(id, &e).second) {
      throw Error(ErrorKind::kDuplicateUtterance, "duplicate utterance " + id);
    }
  }
  KaldiFiles files;
  std::map<std::string, std::vector<std::string>> spk2utt;
  for (const auto& [id, e] : by_utt) {
    const std::string text = Join(SplitSpaces(e->transcript), " ");
    files.text += text.empty() ? id + "\n" : id + " " + text + "\n";
    files.wav_scp += id + " " + e->audio_path + "\n";
    files.utt2spk += id + " " + e->meta.Speaker() + "\n";
    spk2utt[e->meta.Speaker()].push_back(id);
  }
  for (const auto& [spk, utts] : spk2utt) {
    files.spk2utt += spk + " " + Join(utts, " ") + "\n";
  }
  return files;
}

std::vector<std::string> EmitKaldiDataDir(
    const std::vector<ManifestEntry>& manifest, const std::string& outdir) {
  const KaldiFiles files = RenderKaldiDataDir(manifest);
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  std::vector<std::string> written;
  auto write = [&](const std::string& name, const std::string& content) {
    const std::string path = (fs::path(outdir) / name).string();
    WriteFile(path, content);
    written.push_back(path);
  };
  write("text", files.text);
  write("wav.scp", files.wav_scp);
  write("utt2spk", files.utt2spk);
  write("spk2utt", files.spk2utt);
  std::vector<const ManifestEntry*> with_phones;
  for (const ManifestEntry& e : manifest) {
    if (e.phones) with_phones.push_back(&e);
  }
  if (!with_phones.empty()) {
    fs::create_directories(fs::path(outdir) / "phn");
    std::sort(with_phones.begin(), with_phones.end(),
              [](const ManifestEntry* a, const ManifestEntry* b) {
                return UtteranceId(a->meta) < UtteranceId(b->meta);
              });
    for (const ManifestEntry* e : with_phones) {
      write("phn/" + UtteranceId(e->meta) + ".phn", *e->phones + "\n");
    }
  }
  return written;
}

}  // namespace ckb
