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

#include "ckb/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ckb/corpus_designer.h"
#include "ckb/diphone_stats.h"
#include "ckb/error.h"
#include "ckb/g2p.h"
#include "ckb/kaldi_datadir.h"
#include "ckb/lexicon_builder.h"
#include "ckb/ngram_lm.h"
#include "ckb/normalizer.h"
#include "ckb/pipeline_config.h"
#include "ckb/scorer.h"
#include "ckb/text_util.h"
#include "ckb/token_frequency.h"
#include "ckb/transcriber.h"

namespace ckb {

namespace {

// Tables and converters shared by every subcommand.
class Context {
 public:
  explicit Context(const PipelineConfig& config)
      : config_(config),
        hash_(config.HashHex()),
        script_(ScriptModel::Load(config.ResolvePath("script"))),
        rules_(LoadOr<RuleTable>("rules")),
        corrections_(LoadOr<CorrectionTable>("corrections")),
        constraints_(config.constraints.empty()
                         ? ConstraintSet::Default()
                         : ConstraintSet::Load(config.ResolvePath("constraints"))),
        g2p_(script_, constraints_,
             G2pOptions{static_cast<size_t>(config.g2p_cap),
                        static_cast<size_t>(config.g2p_beam)}),
        transcriber_(g2p_, rules_, corrections_) {
    if (!config.variant_groups.empty()) {
      groups_ = LoadVariantGroups(config.ResolvePath("variant_groups"));
    }
    if (!config.overrides.empty()) {
      overrides_ = LoadOverrides(config.ResolvePath("overrides"), script_);
    }
  }

  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  const PipelineConfig& config() const { return config_; }
  const ScriptModel& script() const { return script_; }
  const RuleTable& rules() const { return rules_; }
  const CorrectionTable& corrections() const { return corrections_; }
  const G2p& g2p() const { return g2p_; }
  const Transcriber& transcriber() const { return transcriber_; }
  const VariantGroups& groups() const { return groups_; }
  const std::vector<LexiconOverride>& overrides() const { return overrides_; }

  std::string Header(std::string_view command) const {
    return fmt::format("# ckb {} {}\n# config_hash {}\n", kToolVersion, command,
                       hash_);
  }

  std::string Meta(std::string_view command) const {
    return fmt::format("tool\tckb\nversion\t{}\ncommand\t{}\nconfig_hash\t{}\n",
                       kToolVersion, command, hash_);
  }

 private:
  template <typename T>
  T LoadOr(std::string_view key) const {
    const std::string path = config_.ResolvePath(key);
    return path.empty() ? T() : T::Load(path);
  }

  PipelineConfig config_;
  std::string hash_;
  ScriptModel script_;
  RuleTable rules_;
  CorrectionTable corrections_;
  ConstraintSet constraints_;
  G2p g2p_;
  Transcriber transcriber_;
  VariantGroups groups_;
  std::vector<LexiconOverride> overrides_;
};

bool IsStdio(const std::string& path) { return path.empty() || path == "-"; }

std::vector<std::string> InputLines(const std::string& path) {
  if (!IsStdio(path)) return ReadLines(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(std::cin, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  return in;
}

// Writes a TSV report with the comment header.
void WriteReport(const Context& ctx, std::string_view command,
                 const std::string& path, const std::string& body,
                 std::ostream& out) {
  const std::string content = ctx.Header(command) + body;
  if (IsStdio(path)) {
    out << content;
  } else {
    WriteFile(path, content);
  }
}

// Writes a bit-exact artifact with a `.meta` sidecar.
void WriteArtifact(const Context& ctx, std::string_view command,
                   const std::string& path, const std::string& body,
                   std::ostream& out) {
  if (IsStdio(path)) {
    out << body;
    return;
  }
  WriteFile(path, body);
  WriteFile(path + ".meta", ctx.Meta(command));
}

std::vector<std::vector<std::string>> WordSentences(
    const Context& ctx, const std::vector<std::string>& lines) {
  std::vector<std::vector<std::string>> sentences;
  for (const std::string& line : lines) {
    if (IsCommentOrBlank(line)) continue;
    sentences.push_back(ctx.transcriber().Normalize(line).Words());
  }
  return sentences;
}

PhoneSeq WordsToPhones(const Context& ctx, const std::vector<std::string>& words,
                       std::vector<std::string>* unconvertible) {
  PhoneSeq phones;
  for (const std::string& w : words) {
    if (const PhoneSeq* p = ctx.transcriber().WordPhones(w)) {
      phones.insert(phones.end(), p->begin(), p->end());
    } else if (unconvertible != nullptr) {
      unconvertible->push_back(w);
    }
  }
  return phones;
}

struct Args {
  std::string input;
  std::string output;
  bool words_only = false;
  size_t nbest = 1;
  bool skip_unknown = false;
  std::string top_out;
  std::string pool;
  std::string target;
  std::string target_corpus;
  std::string report;
  std::string suggest;
  std::string freq;
  std::string corpus;
  std::string rejects;
  std::string corrections_out;
  size_t k = 0;
  std::string lexicon;
  std::string counts_out;
  std::string test;
  bool phn = false;
};

int RunNormalize(const Context& ctx, const Args& a, std::ostream& out) {
  std::string body;
  for (const std::string& line : InputLines(a.input)) {
    const TokenStream stream = ctx.transcriber().Normalize(line);
    body += a.words_only ? Join(stream.Words(), " ") : stream.Render();
    body += '\n';
  }
  WriteArtifact(ctx, "normalize", a.output, body, out);
  return kExitOk;
}

int RunG2p(const Context& ctx, const Args& a, std::ostream& out,
           std::ostream& err) {
  if (a.nbest == 0) throw Error(ErrorKind::kInvalidArgument, "--nbest must be >= 1");
  std::string body;
  size_t skipped = 0;
  for (const std::string& line : InputLines(a.input)) {
    for (const std::string& word : ctx.transcriber().Normalize(line).Words()) {
      if (a.skip_unknown && ctx.transcriber().WordPhones(word) == nullptr) {
        ++skipped;
        continue;
      }
      if (a.nbest == 1) {
        body += word + "\t" + FormatPhones(ctx.g2p().Convert(word)) + "\n";
        continue;
      }
      const CandidateSet set = ctx.g2p().GenerateCandidates(word);
      for (size_t r = 0; r < set.candidates.size() && r < a.nbest; ++r) {
        const PronunciationCandidate& c = set.candidates[r];
        body += fmt::format("{}\t{}\t{}\t{}\n", word, r + 1, c.penalty,
                            FormatPhones(c.phones));
      }
    }
  }
  if (skipped > 0) {
    err << fmt::format("warning: skipped {} words G2P cannot convert\n", skipped);
  }
  WriteArtifact(ctx, "g2p", a.output, body, out);
  return kExitOk;
}

DiphoneDistribution CorpusDistribution(const Context& ctx,
                                       const std::vector<std::string>& lines,
                                       size_t* unconvertible) {
  DiphoneCounter counter(ctx.script());
  for (const std::string& line : lines) {
    if (IsCommentOrBlank(line)) continue;
    const Transcription t = ctx.transcriber().Transcribe(line);
    counter.AddStream(t.phones);
    if (unconvertible != nullptr) *unconvertible += t.unconvertible.size();
  }
  return counter.Distribution();
}

int RunStats(const Context& ctx, const Args& a, std::ostream& out,
             std::ostream& err) {
  size_t unconvertible = 0;
  const DiphoneDistribution dist =
      CorpusDistribution(ctx, InputLines(a.input), &unconvertible);
  if (unconvertible > 0) {
    err << fmt::format("warning: {} word tokens could not be transcribed\n",
                       unconvertible);
  }
  WriteReport(ctx, "stats", a.output, dist.ToTsv(), out);
  if (!a.top_out.empty() && !dist.empty()) {
    WriteReport(ctx, "stats", a.top_out,
                TopNTsv(dist, static_cast<size_t>(ctx.config().top_n)), out);
  }
  return kExitOk;
}

int RunDesign(const Context& ctx, const Args& a, std::ostream& out,
              std::ostream& err) {
  DiphoneDistribution target;
  std::vector<TokenFrequency> freq;
  if (!a.target.empty()) {
    std::ifstream in = OpenInput(a.target);
    target = DiphoneDistribution::FromTsv(in, a.target, ctx.script());
  } else if (!a.target_corpus.empty()) {
    const std::vector<std::string> lines = ReadLines(a.target_corpus);
    target = CorpusDistribution(ctx, lines, nullptr);
    freq = CountTokens(WordSentences(ctx, lines));
  } else {
    throw Error(ErrorKind::kInvalidArgument,
                "design needs --target or --target-corpus");
  }
  if (!a.freq.empty()) {
    std::ifstream in = OpenInput(a.freq);
    freq = ParseFrequencyTable(in, a.freq);
  }
  const std::map<std::string, size_t> ranks = FrequencyRanks(freq);

  std::ifstream pool_in = OpenInput(a.pool);
  std::vector<CandidateSentence> pool;
  for (PoolLine& line : ParsePool(pool_in, a.pool)) {
    pool.push_back(MakeCandidate(std::move(line.id), std::move(line.text),
                                 ctx.transcriber(), freq.empty() ? nullptr : &ranks));
  }
  SelectionParams params;
  params.epsilon = ctx.config().design_epsilon;
  params.max_sentences = static_cast<size_t>(ctx.config().design_max_sentences);
  const SelectionState state = SelectSentences(pool, target, params);
  if (!state.unreachable.empty()) {
    err << fmt::format("warning: {} target di-phones occur in no pool sentence\n",
                       state.unreachable.size());
  }
  WriteReport(ctx, "design", a.output, SelectionTsv(state, pool), out);
  const SelectionReport report = EvaluateSelection(
      state, target, static_cast<size_t>(ctx.config().top_n));
  if (!a.report.empty()) WriteReport(ctx, "design", a.report, report.ToTsv(), out);
  if (!a.suggest.empty()) {
    const std::set<Diphone> missing(report.missing.begin(), report.missing.end());
    std::string body = "token\tfrequency\tmissing_diphones\n";
    for (const WordSuggestion& s : SelectWords(freq, missing, ctx.g2p())) {
      body += fmt::format("{}\t{}\t{}\n", s.token, s.frequency,
                          s.missing_contained);
    }
    WriteReport(ctx, "design", a.suggest, body, out);
  }
  return kExitOk;
}

int RunLexicon(const Context& ctx, const Args& a, std::ostream& out,
               std::ostream& err) {
  if (IsStdio(a.output)) {
    throw Error(ErrorKind::kInvalidArgument, "lexicon needs an --output path");
  }
  std::vector<TokenFrequency> table;
  if (!a.corpus.empty()) {
    std::vector<std::vector<std::string>> sentences;
    for (const std::string& line : ReadLines(a.corpus)) {
      if (IsCommentOrBlank(line)) continue;
      sentences.push_back(Tokenize(NormalizeUnicode(line, ctx.script())).Words());
    }
    table = CountTokens(sentences);
  } else {
    std::ifstream in = OpenInput(a.input);
    table = ParseFrequencyTable(in, a.input);
  }
  const size_t k = a.k > 0 ? a.k : static_cast<size_t>(ctx.config().lexicon_k);
  bool short_vocabulary = false;
  const std::vector<TokenFrequency> tokens =
      ExtractFrequentTokens(table, k, &short_vocabulary);
  if (short_vocabulary) {
    err << fmt::format("warning: k={} exceeds the vocabulary of {} tokens\n", k,
                       table.size());
  }
  LexiconInputs inputs;
  inputs.rules = &ctx.rules();
  inputs.corrections = &ctx.corrections();
  inputs.g2p = &ctx.g2p();
  inputs.variant_groups = &ctx.groups();
  inputs.overrides = &ctx.overrides();
  const LexiconBuildResult result = BuildLexicon(tokens, inputs);
  for (const std::string& w : result.warnings) err << "warning: " << w << "\n";

  WriteArtifact(ctx, "lexicon", a.output,
                FormatLexicon(result.entries, ctx.config().merge_ix), out);
  WriteReport(ctx, "lexicon",
              a.rejects.empty() ? a.output + ".rejects.tsv" : a.rejects,
              FormatRejects(result.rejects), out);
  std::string corrections = "input\tsurface\n";
  for (const auto& [from, to] : result.corrections) {
    corrections += from + "\t" + to + "\n";
  }
  WriteReport(ctx, "lexicon",
              a.corrections_out.empty() ? a.output + ".corrections.tsv"
                                        : a.corrections_out,
              corrections, out);
  size_t canonical = 0;
  for (const LexiconEntry& e : result.entries) canonical += e.canonical ? 1 : 0;
  out << fmt::format("tokens\t{}\nentries\t{}\nrejects\t{}\n", tokens.size(),
                     canonical, result.rejects.size());
  return kExitOk;
}

int RunLm(const Context& ctx, const Args& a, std::ostream& out) {
  const auto sentences = WordSentences(ctx, InputLines(a.input));
  std::set<std::string> vocab;
  if (!a.lexicon.empty()) {
    for (const auto& [surface, prons] : LoadLexicon(a.lexicon, ctx.script())) {
      vocab.insert(surface);
    }
  }
  const NgramCounts counts =
      CountNgrams(sentences, a.lexicon.empty() ? nullptr : &vocab, 3);
  if (!a.counts_out.empty()) {
    WriteReport(ctx, "lm", a.counts_out, counts.ToTsv(), out);
  }
  EstimateOptions options;
  options.discount = ctx.config().lm_discount;
  options.min_count = ctx.config().lm_min_count;
  const NgramModel model = Estimate(counts, options);
  WriteArtifact(ctx, "lm", a.output, ToArpa(model), out);
  if (!a.test.empty()) {
    const auto test = WordSentences(ctx, ReadLines(a.test));
    out << fmt::format("perplexity\t{:.4f}\n", Perplexity(model, test));
  }
  return kExitOk;
}

int RunScore(const Context& ctx, const Args& a, std::ostream& out,
             std::ostream& err) {
  std::vector<ScoredUtterance> utts;
  size_t line_no = 0;
  std::vector<std::string> unconvertible;
  for (const std::string& line : InputLines(a.input)) {
    ++line_no;
    if (IsCommentOrBlank(line)) continue;
    const auto f = SplitTabs(line);
    if (f.size() != 4) {
      throw Error(ErrorKind::kMalformedFile,
                  fmt::format("{}:{}: expected utt_id<TAB>topic<TAB>ref<TAB>hyp",
                              a.input, line_no));
    }
    if (line_no == 1 && f[0] == "utt_id") continue;
    ScoredUtterance u;
    u.utt_id = f[0];
    u.topic = f[1];
    u.ref_words = ctx.transcriber().Normalize(f[2]).Words();
    u.hyp_words = ctx.transcriber().Normalize(f[3]).Words();
    u.ref_phones = WordsToPhones(ctx, u.ref_words, &unconvertible);
    u.hyp_phones = WordsToPhones(ctx, u.hyp_words, &unconvertible);
    utts.push_back(std::move(u));
  }
  if (utts.empty()) {
    throw Error(ErrorKind::kEmptyReference, "no utterances to score");
  }
  const TopicReport report = PerTopicReport(utts);
  for (const std::string& w : report.warnings) err << "warning: " << w << "\n";
  if (!unconvertible.empty()) {
    err << fmt::format(
        "warning: {} words without pronunciation left out of PER\n",
        unconvertible.size());
  }
  if (report.overall.ref_words == 0) {
    throw Error(ErrorKind::kEmptyReference, "total reference length is zero");
  }
  WriteReport(ctx, "score", a.output, report.ToTsv(), out);
  return kExitOk;
}

int RunKaldiPrep(const Context& ctx, const Args& a, std::ostream& out) {
  if (IsStdio(a.output)) {
    throw Error(ErrorKind::kInvalidArgument,
                "kaldi-prep needs an --output directory");
  }
  std::ifstream in = OpenInput(a.input);
  std::vector<ManifestEntry> manifest = ParseManifest(in, a.input);
  for (ManifestEntry& e : manifest) {
    const std::vector<std::string> words =
        ctx.transcriber().Normalize(e.transcript).Words();
    e.transcript = Join(words, " ");
    if (a.phn) {
      std::vector<std::string> missing;
      const PhoneSeq phones = WordsToPhones(ctx, words, &missing);
      if (!missing.empty()) {
        throw Error(ErrorKind::kUnknownGrapheme,
                    fmt::format("{}: no pronunciation for '{}'", e.audio_path,
                                missing.front()));
      }
      e.phones = FormatPhones(phones);
    }
  }
  const auto written = EmitKaldiDataDir(manifest, a.output);
  WriteFile((std::filesystem::path(a.output) / "ckb.meta").string(),
            ctx.Meta("kaldi-prep"));
  out << fmt::format("utterances\t{}\nfiles\t{}\n", manifest.size(),
                     written.size() + 1);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Central Kurdish speech-resource toolkit", "ckb"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));
  std::string config_path;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", sets, "override one config key (key=value)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  Args a;
  auto io = [&a](CLI::App* sub, bool input_required) {
    auto* in = sub->add_option("-i,--input", a.input, "input file ('-' for stdin)");
    if (input_required) in->required();
    sub->add_option("-o,--output", a.output, "output file ('-' for stdout)");
  };

  CLI::App* normalize = app.add_subcommand("normalize", "normalize and standardize text");
  io(normalize, false);
  normalize->add_flag("--words-only", a.words_only, "drop punctuation from the output");

  CLI::App* g2p = app.add_subcommand("g2p", "convert words to phonemes");
  io(g2p, false);
  g2p->add_option("--nbest", a.nbest, "list the N best candidates with penalties");
  g2p->add_flag("--skip-unknown", a.skip_unknown, "skip words with non-Sorani letters");

  CLI::App* stats = app.add_subcommand("stats", "di-phone distribution of a corpus");
  io(stats, false);
  stats->add_option("--top-out", a.top_out, "plot-ready top-N table");

  CLI::App* design = app.add_subcommand("design", "select a balanced sentence set");
  design->add_option("-i,--pool", a.pool, "candidate sentences")->required();
  design->add_option("-o,--output", a.output, "selection TSV");
  design->add_option("--target", a.target, "target distribution TSV");
  design->add_option("--target-corpus", a.target_corpus, "target corpus text");
  design->add_option("--report", a.report, "coverage and divergence report");
  design->add_option("--suggest", a.suggest, "words containing missing di-phones");
  design->add_option("--freq", a.freq, "token frequency table for suggestions");

  CLI::App* lexicon = app.add_subcommand("lexicon", "build the pronunciation lexicon");
  io(lexicon, false);
  lexicon->add_option("--corpus", a.corpus, "count tokens from this text instead");
  lexicon->add_option("--rejects", a.rejects, "G2P failures for manual review");
  lexicon->add_option("--corrections-out", a.corrections_out, "spelling map");
  lexicon->add_option("-k", a.k, "number of frequent tokens (default from config)");

  CLI::App* lm = app.add_subcommand("lm", "estimate a trigram language model");
  io(lm, true);
  lm->add_option("--lexicon", a.lexicon, "closed vocabulary from a lexicon");
  lm->add_option("--counts-out", a.counts_out, "n-gram counts dump");
  lm->add_option("--test", a.test, "report perplexity on this text");

  CLI::App* score = app.add_subcommand("score", "WER and PER per topic");
  io(score, true);

  CLI::App* kaldi = app.add_subcommand("kaldi-prep", "write a Kaldi data directory");
  io(kaldi, true);
  kaldi->add_flag("--phn", a.phn, "also write phn/<utt>.phn phone files");

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  std::unique_ptr<Context> ctx;
  try {
    PipelineConfig config;
    if (!config_path.empty()) config = PipelineConfig::Load(config_path);
    config.ApplyEnvironment();
    for (const std::string& s : sets) {
      const size_t eq = s.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorKind::kInvalidArgument, "--set expects key=value");
      }
      config.Set(TrimAscii(s.substr(0, eq)), TrimAscii(s.substr(eq + 1)));
    }
    ctx = std::make_unique<Context>(config);
  } catch (const Error& e) {
    err << "ckb: " << e.what() << "\n";
    return e.kind() == ErrorKind::kInvalidArgument ? kExitUsageError
                                                   : kExitDataError;
  }

  try {
    if (*normalize) return RunNormalize(*ctx, a, out);
    if (*g2p) return RunG2p(*ctx, a, out, err);
    if (*stats) return RunStats(*ctx, a, out, err);
    if (*design) return RunDesign(*ctx, a, out, err);
    if (*lexicon) return RunLexicon(*ctx, a, out, err);
    if (*lm) return RunLm(*ctx, a, out);
    if (*score) return RunScore(*ctx, a, out, err);
    if (*kaldi) return RunKaldiPrep(*ctx, a, out);
  } catch (const Error& e) {
    err << "ckb: " << e.what() << "\n";
    return e.kind() == ErrorKind::kInvalidArgument ? kExitUsageError
                                                   : kExitDataError;
  } catch (const std::exception& e) {
    err << "ckb: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsageError;
}

}  // namespace ckb
