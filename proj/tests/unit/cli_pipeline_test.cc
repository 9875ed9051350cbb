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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>

#include "ckb/cli.h"
#include "ckb/error.h"
#include "ckb/kaldi_datadir.h"
#include "ckb/pipeline_config.h"
#include "ckb/text_util.h"
#include "ckb/utterance_meta.h"
#include "oracles.h"

namespace ckb {
namespace {

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIo;
}

TEST(UtteranceMetaTest, ReferenceNames) {
  const UtteranceMeta a = ParseUtteranceFilename("F00123045");
  EXPECT_EQ(a.gender, Gender::kFemale);
  EXPECT_EQ(a.device, Device::kLaptop);
  EXPECT_EQ(a.mic, Microphone::kUsb);
  EXPECT_EQ(a.sentence_id, 123);
  EXPECT_EQ(a.speaker_id, 45);
  const UtteranceMeta b = ParseUtteranceFilename("speech/M11000999.wav");
  EXPECT_EQ(b.gender, Gender::kMale);
  EXPECT_EQ(b.device, Device::kPc);
  EXPECT_EQ(b.mic, Microphone::kJack);
  EXPECT_EQ(b.sentence_id, 0);
  EXPECT_EQ(b.speaker_id, 999);
  EXPECT_EQ(b.Render(), "M11000999");
  EXPECT_EQ(b.Speaker(), "999");
}

TEST(UtteranceMetaTest, MalformedNames) {
  for (const char* name : {"X00123045", "F20123045", "F02123045", "F00a23045", "F00700045",
                           "F0012304", "F001230450"}) {
    EXPECT_EQ(KindOf([&] { ParseUtteranceFilename(name); }), ErrorKind::kMalformedName) << name;
  }
  try {
    ParseUtteranceFilename("X00123045.wav");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("position 1"), std::string::npos) << e.what();
  }
}

TEST(UtteranceMetaTest, RenderParseIdentity) {
  std::mt19937 rng(113);
  for (int i = 0; i < 10000; ++i) {
    UtteranceMeta m;
    m.gender = rng() % 2 ? Gender::kMale : Gender::kFemale;
    m.device = static_cast<Device>(rng() % 2);
    m.mic = static_cast<Microphone>(rng() % 2);
    m.sentence_id = static_cast<int>(rng() % 700);
    m.speaker_id = static_cast<int>(rng() % 1000);
    const std::string name = m.Render();
    ASSERT_EQ(name.size(), kStemLength);
    ASSERT_EQ(ParseUtteranceFilename(name + ".wav"), m);
  }
  UtteranceMeta bad;
  bad.sentence_id = 700;
  EXPECT_THROW(bad.Render(), Error);
}

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<ManifestEntry> LoadManifest(const std::string& path) {
  std::istringstream in(ReadFile(path));
  return ParseManifest(in, path);
}

TEST(KaldiDataDirTest, SingleUtterance) {
  std::istringstream in("wav/F00001002.wav\tدل\n");
  const KaldiFiles f = RenderKaldiDataDir(ParseManifest(in, "m.tsv"));
  EXPECT_EQ(f.text, "002_F00001002 دل\n");
  EXPECT_EQ(f.wav_scp, "002_F00001002 wav/F00001002.wav\n");
  EXPECT_EQ(f.utt2spk, "002_F00001002 002\n");
  EXPECT_EQ(f.spk2utt, "002 002_F00001002\n");
}

TEST(KaldiDataDirTest, ThreeSpeakerGolden) {
  const auto manifest = LoadManifest(testing::TestDataPath("kaldi3_manifest.tsv"));
  const std::string dir = testing::MakeTempDir("ckb-kaldi3");
  EmitKaldiDataDir(manifest, dir);
  for (const char* name : {"text", "wav.scp", "utt2spk", "spk2utt"}) {
    EXPECT_EQ(ReadFile(dir + "/" + name), ReadFile(testing::GoldenPath(std::string("kaldi3/") + name)))
        << name;
  }
}

TEST(KaldiDataDirTest, Utt2spkAndSpk2uttAreInverse) {
  const KaldiFiles f = RenderKaldiDataDir(LoadManifest(testing::TestDataPath("kaldi3_manifest.tsv")));
  std::map<std::string, std::string> u2s;
  for (const std::string& line : SplitLines(f.utt2spk)) {
    const auto p = SplitSpaces(line);
    ASSERT_EQ(p.size(), 2u);
    u2s[p[0]] = p[1];
  }
  size_t listed = 0;
  for (const std::string& line : SplitLines(f.spk2utt)) {
    const auto p = SplitSpaces(line);
    for (size_t i = 1; i < p.size(); ++i) {
      EXPECT_EQ(u2s.at(p[i]), p[0]);
      ++listed;
    }
  }
  EXPECT_EQ(listed, u2s.size());
}

TEST(KaldiDataDirTest, Errors) {
  std::istringstream dup("a/F00001002.wav\tدل\nb/F00001002.wav\tبا\n");
  const auto manifest = ParseManifest(dup, "m.tsv");
  EXPECT_EQ(KindOf([&] { RenderKaldiDataDir(manifest); }), ErrorKind::kDuplicateUtterance);
  ManifestEntry missing;
  missing.transcript = "دل";
  EXPECT_EQ(KindOf([&] { RenderKaldiDataDir({missing}); }), ErrorKind::kMissingAudioPath);
  std::istringstream bad("a/Q00001002.wav\tدل\n");
  EXPECT_EQ(KindOf([&] { ParseManifest(bad, "m.tsv"); }), ErrorKind::kMalformedName);
}

TEST(PipelineConfigTest, ParseSerializeRoundTrip) {
  std::istringstream in("# settings\nlm_discount = 0.5\nmerge_ix = true\nlexicon_k=200\n");
  const PipelineConfig c = PipelineConfig::Parse(in, "c.conf");
  EXPECT_EQ(c.lm_discount, 0.5);
  EXPECT_TRUE(c.merge_ix);
  EXPECT_EQ(c.lexicon_k, 200u);
  std::istringstream again(c.Serialize());
  const PipelineConfig d = PipelineConfig::Parse(again, "s.conf");
  EXPECT_EQ(d.Serialize(), c.Serialize());
  EXPECT_EQ(d.Hash(), c.Hash());
}

TEST(PipelineConfigTest, InvalidValues) {
  PipelineConfig c;
  EXPECT_THROW(c.Set("bogus", "1"), Error);
  EXPECT_THROW(c.Set("lm_discount", "1.5"), Error);
  EXPECT_THROW(c.Set("lexicon_k", "many"), Error);
  EXPECT_THROW(c.Set("merge_ix", "maybe"), Error);
  std::istringstream in("lm_discount\n");
  EXPECT_THROW(PipelineConfig::Parse(in, "c.conf"), Error);
}

TEST(PipelineConfigTest, HashTracksSettingsAndTables) {
  PipelineConfig a;
  PipelineConfig b;
  EXPECT_EQ(a.Hash(), b.Hash());
  b.data_dir = testing::DataPath("");
  EXPECT_EQ(a.Hash(), b.Hash());
  b.Set("lm_discount", "0.6");
  EXPECT_NE(a.Hash(), b.Hash());

  const std::string dir = testing::MakeTempDir("ckb-conf");
  for (const char* f : {"sorani_script.tsv", "standardization_rules.tsv", "constraints.tsv",
                        "corrections.tsv", "variant_groups.tsv"}) {
    std::filesystem::copy_file(testing::DataPath(f), dir + "/" + f);
  }
  PipelineConfig c;
  c.data_dir = dir;
  EXPECT_EQ(c.Hash(), a.Hash());
  WriteFile(dir + "/corrections.tsv", ReadFile(dir + "/corrections.tsv") + "کچ\tکچ\n");
  EXPECT_NE(c.Hash(), a.Hash());
  EXPECT_EQ(c.HashHex().size(), 16u);
}

TEST(PipelineConfigTest, EnvironmentOverrides) {
  setenv("CKB_TOP_N", "7", 1);
  PipelineConfig c;
  c.ApplyEnvironment();
  unsetenv("CKB_TOP_N");
  EXPECT_EQ(c.top_n, 7u);
}

int Ckb(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
  args.insert(args.begin(), "ckb");
  std::ostringstream o;
  std::ostringstream e;
  const int status = RunCli(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return status;
}

TEST(RunCliTest, G2pOneWordOneLine) {
  const std::string dir = testing::MakeTempDir("ckb-cli");
  WriteFile(dir + "/w.txt", "دل\n");
  ASSERT_EQ(Ckb({"g2p", "-i", dir + "/w.txt", "-o", dir + "/out.tsv"}), kExitOk);
  EXPECT_EQ(ReadFile(dir + "/out.tsv"), "دل\td ix l\n");
  const std::string meta = ReadFile(dir + "/out.tsv.meta");
  EXPECT_NE(meta.find("config_hash\t" + PipelineConfig().HashHex()), std::string::npos) << meta;
}

TEST(RunCliTest, ReportsEmbedVersionAndHash) {
  const std::string dir = testing::MakeTempDir("ckb-cli");
  WriteFile(dir + "/c.txt", "دل، باران.\n");
  ASSERT_EQ(Ckb({"stats", "-i", dir + "/c.txt", "-o", dir + "/s.tsv"}), kExitOk);
  const std::string s = ReadFile(dir + "/s.tsv");
  EXPECT_EQ(s.rfind("# ckb " + std::string(kToolVersion) + " stats\n# config_hash " +
                        PipelineConfig().HashHex() + "\n",
                    0),
            0u)
      << s;
}

TEST(RunCliTest, ExitCodes) {
  const std::string dir = testing::MakeTempDir("ckb-cli");
  WriteFile(dir + "/w.txt", "دل\n");
  EXPECT_EQ(Ckb({}), kExitUsageError);
  EXPECT_EQ(Ckb({"frobnicate"}), kExitUsageError);
  EXPECT_EQ(Ckb({"lm"}), kExitUsageError);
  EXPECT_EQ(Ckb({"--set", "bogus=1", "g2p", "-i", dir + "/w.txt"}), kExitUsageError);
  std::string err;
  EXPECT_EQ(Ckb({"g2p", "-i", dir + "/missing.txt", "-o", dir + "/o"}, nullptr, &err),
            kExitDataError);
  EXPECT_NE(err.find("io:"), std::string::npos) << err;
  WriteFile(dir + "/bad.txt", "دلx\n");
  EXPECT_EQ(Ckb({"g2p", "-i", dir + "/bad.txt", "-o", dir + "/o"}), kExitDataError);
  WriteFile(dir + "/badname.tsv", "wav/Q00001002.wav\tدل\n");
  EXPECT_EQ(Ckb({"kaldi-prep", "-i", dir + "/badname.tsv", "-o", dir + "/k"}), kExitDataError);
}

TEST(RunCliTest, SetOverridesConfigFile) {
  const std::string dir = testing::MakeTempDir("ckb-cli");
  WriteFile(dir + "/c.txt", "a b\n");
  WriteFile(dir + "/ckb.conf", "lm_discount = 0.9\n");
  ASSERT_EQ(Ckb({"--config", dir + "/ckb.conf", "lm", "-i", dir + "/c.txt", "-o", dir + "/a.arpa"}),
            kExitOk);
  ASSERT_EQ(Ckb({"--config", dir + "/ckb.conf", "--set", "lm_discount=0.5", "lm", "-i",
                 dir + "/c.txt", "-o", dir + "/b.arpa"}),
            kExitOk);
  // log10(7/24), the unigram probability of "a" at d = 1/2.
  EXPECT_NE(ReadFile(dir + "/b.arpa").find("-0.5351132017\ta\t"), std::string::npos);
  EXPECT_NE(ReadFile(dir + "/a.arpa"), ReadFile(dir + "/b.arpa"));
  EXPECT_NE(ReadFile(dir + "/a.arpa.meta"), ReadFile(dir + "/b.arpa.meta"));
}

TEST(RunCliTest, DemoPipelineDeterministic) {
  const std::string a = testing::MakeTempDir("ckb-demo");
  const std::string b = testing::MakeTempDir("ckb-demo");
  std::string log;
  ASSERT_EQ(testing::RunDemoPipeline(a, &log), 0) << log;
  ASSERT_EQ(testing::RunDemoPipeline(b, nullptr), 0);
  const auto fa = testing::DirectoryContents(a);
  const auto fb = testing::DirectoryContents(b);
  for (const char* name : {"corpus.norm.txt", "corpus.g2p.tsv", "diphones.tsv", "selection.tsv",
                           "lexicon.txt", "lm.arpa", "kaldi/text", "kaldi/wav.scp",
                           "kaldi/utt2spk", "kaldi/spk2utt", "score.tsv"}) {
    ASSERT_TRUE(fa.count(name)) << name;
    EXPECT_FALSE(fa.at(name).empty()) << name;
  }
  EXPECT_EQ(fa, fb);
}

}  // namespace
}  // namespace ckb
