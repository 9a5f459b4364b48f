// Copyright 2026 The twopass Authors.
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

// Command-line front end: graph building, decoding, rescoring, scoring,
// fixture generation, benchmarking and the end-to-end pipeline.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

#include "twopass/error.h"
#include "twopass/eval/cer.h"
#include "twopass/eval/fixture.h"
#include "twopass/eval/nbest_io.h"
#include "twopass/eval/pipeline.h"
#include "twopass/eval/rtf.h"
#include "twopass/fst/io.h"
#include "twopass/graph/builders.h"
#include "twopass/log.h"
#include "twopass/parallel/batch.h"
#include "twopass/rescore/joint_baseline.h"
#include "twopass/text.h"

using namespace twopass;

namespace {

struct BeamFlags {
  double beam = BeamConfig{}.beam;
  int max_active = BeamConfig{}.max_active;
  double acoustic_scale = 1.0;
  double word_penalty = 0.0;
  int nbest = kDefaultNbestSize;
  std::string chunk;  // empty: single-shot

  void Add(CLI::App *app) {
    app->add_option("--beam", beam, "Beam width in nats")->capture_default_str();
    app->add_option("--max-active", max_active, "Maximum active tokens per frame")->capture_default_str();
    app->add_option("--acoustic-scale", acoustic_scale)->capture_default_str();
    app->add_option("--word-penalty", word_penalty, "Word insertion penalty in nats")->capture_default_str();
    app->add_option("--nbest", nbest, "Hypotheses per utterance")->capture_default_str();
    app->add_option("--chunk", chunk, "Streaming chunks Nl,Nc,Nr in input frames (default: whole utterance)");
  }
  BeamConfig Beam() const {
    BeamConfig b;
    b.beam = beam;
    b.max_active = max_active;
    b.acoustic_scale = acoustic_scale;
    b.word_insertion_penalty = word_penalty;
    b.nbest = std::max(ChooseNbestSize(nbest), BeamConfig{}.nbest);
    return b;
  }
  std::optional<ChunkConfig> Chunks() const {
    if (chunk.empty() || chunk == "none") return std::nullopt;
    return ParseChunkConfig(chunk);
  }
};

std::ostream &OpenOut(const std::string &path, std::ofstream &file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw IoError("cannot write " + path);
  return file;
}

int BuildGraphCmd(const std::string &arpa, const std::string &lexicon, const std::string &units,
                  const std::string &out, bool text, size_t max_states) {
  GraphOptions opts;
  opts.max_determinize_states = max_states;
  SearchGraph s = BuildSearchGraph(ArpaModel::Read(arpa), Lexicon::Read(lexicon),
                                   TokenInventory::Read(units), opts);
  for (const std::string &w : s.warnings) LogWarning(w);
  WriteWfst(s.fst, out, !text);
  std::cout << "states=" << s.fst.NumStates() << "\narcs=" << s.fst.NumArcs()
            << "\nlg_states=" << s.lg_states << "\ndet_states=" << s.det_states
            << "\nmin_states=" << s.min_states << "\n";
  return 0;
}

int DecodeCmd(const std::string &graph_path, const std::string &dir, const BeamFlags &flags,
              const std::string &out_path, int threads) {
  auto graph = std::make_shared<const Wfst>(ReadWfst(graph_path));
  if (!graph->OutputSymbols()) throw FormatError("graph has no word symbol table");
  auto files = ListPosteriorFiles(dir);
  std::vector<PosteriorMatrix> posts;
  for (const auto &f : files) posts.push_back(PosteriorMatrix::Read(f.second));
  BatchDecodeOptions opts{flags.Chunks(), flags.Beam(), ChooseNbestSize(flags.nbest)};
  auto outcomes = threads == 1 ? DecodeBatchSerial(graph, posts, opts)
                               : DecodeBatchParallel(graph, posts, opts, threads);
  std::ofstream file;
  std::ostream &out = OpenOut(out_path, file);
  int failures = 0;
  for (size_t i = 0; i < files.size(); ++i) {
    if (!outcomes[i].ok()) {
      LogWarning(files[i].first + ": " + outcomes[i].error);
      ++failures;
      continue;
    }
    for (const auto &r : ToRecords(files[i].first, outcomes[i].nbest, *graph->OutputSymbols())) {
      WriteNbestRecord(out, r);
    }
  }
  return failures == static_cast<int>(files.size()) && !files.empty() ? 1 : 0;
}

int RescoreCmd(const std::string &nbest_path, const std::string &scorer_spec,
               const std::string &units, const RescoreOptions &opts, double confidence,
               const std::string &out_path) {
  TokenInventory inventory = TokenInventory::Read(units);
  auto scorer = MakeSequenceScorer(scorer_spec, inventory, confidence);
  if (!scorer) throw ConfigError("rescore needs --scorer table:FILE or chararpa:FILE");
  std::ofstream file;
  std::ostream &out = OpenOut(out_path, file);
  SymbolTable words;
  for (const auto &[utt, records] : GroupByUtterance(ReadNbestRecords(nbest_path, false))) {
    NBestList nbest = RecordsToNbest(records, &words, inventory);
    RescoreResult result = RescoreNbest(nbest, *scorer, scorer->Prepare({utt, nullptr}), opts);
    for (const std::string &d : result.dropped) LogWarning(utt + ": dropped " + d);
    for (const auto &r : ToRecords(utt, result, words)) WriteNbestRecord(out, r);
  }
  return 0;
}

int ScoreCmd(const std::string &ref_path, const std::string &hyp_path, const std::string &format) {
  std::map<std::string, std::string> hyps;
  if (format == "text") {
    for (auto &[utt, text] : ReadReferences(hyp_path)) hyps[utt] = text;
  } else if (format == "nbest" || format == "rescored") {
    for (const auto &[utt, records] :
         GroupByUtterance(ReadNbestRecords(hyp_path, format == "rescored"))) {
      const NbestRecord *best = &records.front();
      for (const auto &r : records) {
        if (r.rank < best->rank) best = &r;
      }
      hyps[utt] = Join(best->words, " ");
    }
  } else {
    throw ConfigError("unknown --format '" + format + "' (nbest, rescored or text)");
  }
  EvalReport report;
  for (const auto &[utt, ref] : ReadReferences(ref_path)) {
    auto it = hyps.find(utt);
    if (it == hyps.end()) LogWarning(utt + ": no hypothesis; scored as empty");
    report.Add(CharacterErrors(ref, it == hyps.end() ? "" : it->second));
  }
  std::cout << report.Summary() << "\n" << report.KeyValues();
  return 0;
}

int BenchCmd(const FixtureOptions &fo, int delay_us, int runs, const BeamFlags &flags) {
  SyntheticTask task = GenerateFixture(fo);
  SearchGraph s = BuildSearchGraph(task.arpa, task.lexicon, task.inventory);
  auto graph = std::make_shared<const Wfst>(std::move(s.fst));
  std::map<std::string, LabelSequence> refs;
  for (const auto &u : task.utterances) refs[u.id] = u.units;
  auto table = std::make_shared<TableSequenceScorer>(refs, task.inventory.Size());
  InstrumentedScorer scorer(table, std::chrono::microseconds(delay_us));
  BeamConfig beam = flags.Beam();
  int nbest = ChooseNbestSize(flags.nbest);
  double audio_ms = 0;
  for (const auto &u : task.utterances) audio_ms += AudioMs(u.posteriors.NumFrames());

  scorer.ResetCounts();
  RtfMeasurement two_pass = MeasureRtf(
      [&] {
        for (const auto &u : task.utterances) {
          NBestList list = DecodePosteriors(graph, u.posteriors, beam, nbest);
          RescoreNbest(list, scorer, scorer.Prepare({u.id, &u.posteriors}), RescoreOptions{});
        }
      },
      audio_ms, runs);
  size_t two_pass_calls = scorer.TotalCalls() / runs;
  scorer.ResetCounts();
  RtfMeasurement joint = MeasureRtf(
      [&] {
        for (const auto &u : task.utterances) {
          JointBeamSearch(u.posteriors, scorer, scorer.Prepare({u.id, &u.posteriors}),
                          JointSearchOptions{});
        }
      },
      audio_ms, runs);
  size_t joint_calls = scorer.TotalCalls() / runs;
  std::cout << "utterances=" << task.utterances.size() << "\naudio_ms=" << audio_ms
            << "\ntwo_pass_ms=" << two_pass.median_ms << "\ntwo_pass_rtf=" << two_pass.rtf
            << "\ntwo_pass_scorer_calls=" << two_pass_calls << "\njoint_ms=" << joint.median_ms
            << "\njoint_rtf=" << joint.rtf << "\njoint_scorer_calls=" << joint_calls
            << "\nspeedup=" << joint.median_ms / two_pass.median_ms << "\n";
  return 0;
}

void AddFixtureFlags(CLI::App *app, FixtureOptions *fo) {
  app->add_option("--seed", fo->seed)->capture_default_str();
  app->add_option("--vocab", fo->vocab_size, "Vocabulary size")->capture_default_str();
  app->add_option("--utterances", fo->utterances)->capture_default_str();
  app->add_option("--noise", fo->noise, "Logit noise standard deviation")->capture_default_str();
  app->add_option("--units", fo->num_units, "Number of letter units")->capture_default_str();
  app->add_option("--frames", fo->frames, "Posterior frames per utterance (0: natural length)")
      ->capture_default_str();
  app->add_option("--corpus", fo->corpus_sentences, "LM training sentences")->capture_default_str();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Two-pass streaming speech decoder toolkit"};
  app.require_subcommand(1);

  auto *build = app.add_subcommand("build-graph", "Compile ARPA + lexicon + units into a search graph");
  std::string arpa, lexicon, units, out = "S.bin";
  bool text = false;
  size_t max_states = GraphOptions{}.max_determinize_states;
  build->add_option("--arpa", arpa)->required();
  build->add_option("--lexicon", lexicon)->required();
  build->add_option("--units", units)->required();
  build->add_option("--out", out)->capture_default_str();
  build->add_flag("--text", text, "Write the text format");
  build->add_option("--max-det-states", max_states)->capture_default_str();

  auto *decode = app.add_subcommand("decode", "First-pass n-best decoding of posterior files");
  std::string graph, posteriors, decode_out;
  int threads = 1;
  BeamFlags decode_flags;
  decode->add_option("--graph", graph)->required();
  decode->add_option("--posteriors", posteriors, "Directory of <utt>.post files")->required();
  decode->add_option("--out", decode_out, "N-best output (default stdout)");
  decode->add_option("--threads", threads, "Utterance-parallel threads (0: all)")->capture_default_str();
  decode_flags.Add(decode);

  auto *rescore = app.add_subcommand("rescore", "Rescore n-best lists and fuse scores");
  std::string nbest_in, scorer_spec, rescore_units, rescore_out;
  RescoreOptions ropts;
  double confidence = 0.9;
  rescore->add_option("--nbest", nbest_in)->required();
  rescore->add_option("--scorer", scorer_spec, "table:FILE or chararpa:FILE")->required();
  rescore->add_option("--units", rescore_units)->required();
  rescore->add_option("--alpha", ropts.alpha)->capture_default_str();
  rescore->add_option("--beta", ropts.beta)->capture_default_str();
  rescore->add_flag("--graph-only", ropts.graph_only, "Fuse the graph cost only");
  rescore->add_option("--confidence", confidence, "Table scorer confidence")->capture_default_str();
  rescore->add_option("--out", rescore_out);

  auto *score = app.add_subcommand("score", "Character error rate against references");
  std::string ref, hyp, format = "nbest";
  score->add_option("--ref", ref)->required();
  score->add_option("--hyp", hyp)->required();
  score->add_option("--format", format, "nbest, rescored or text")->capture_default_str();

  auto *bench = app.add_subcommand("bench", "Compare two-pass decoding with joint beam search");
  FixtureOptions bench_fixture;
  bench_fixture.utterances = 5;
  bench_fixture.frames = 1000;
  bench_fixture.noise = 4.0;
  int delay_us = 500, runs = 5;
  BeamFlags bench_flags;
  AddFixtureFlags(bench, &bench_fixture);
  bench->add_option("--delay-us", delay_us, "Scorer delay per call")->capture_default_str();
  bench->add_option("--runs", runs)->capture_default_str();
  bench_flags.Add(bench);

  auto *gen = app.add_subcommand("gen-fixture", "Write a synthetic task");
  FixtureOptions fixture;
  std::string gen_out;
  gen->add_option("--out", gen_out)->required();
  AddFixtureFlags(gen, &fixture);

  auto *pipe = app.add_subcommand("pipeline", "build -> decode -> rescore -> score");
  app.set_config("--config", "", "Config file (TOML/INI) with a [pipeline] section; flags override it");
  PipelineConfig pc;
  BeamFlags pipe_flags;
  pipe->add_option("--units", pc.units);
  pipe->add_option("--lexicon", pc.lexicon);
  pipe->add_option("--arpa", pc.arpa);
  pipe->add_option("--graph", pc.graph, "Compiled graph; built and saved here if missing");
  pipe->add_option("--posteriors", pc.posteriors)->required();
  pipe->add_option("--refs", pc.refs);
  pipe->add_option("--scorer", pc.scorer, "none, table:FILE or chararpa:FILE")->capture_default_str();
  pipe->add_option("--confidence", pc.table_confidence)->capture_default_str();
  pipe->add_option("--alpha", pc.rescore.alpha)->capture_default_str();
  pipe->add_option("--beta", pc.rescore.beta)->capture_default_str();
  pipe->add_flag("--graph-only", pc.rescore.graph_only);
  pipe->add_option("--trace", pc.trace, "Write the n-best trace here");
  pipe->add_option("--threads", pc.threads)->capture_default_str();
  pipe_flags.Add(pipe);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return BuildGraphCmd(arpa, lexicon, units, out, text, max_states);
    if (*decode) return DecodeCmd(graph, posteriors, decode_flags, decode_out, threads);
    if (*rescore) return RescoreCmd(nbest_in, scorer_spec, rescore_units, ropts, confidence, rescore_out);
    if (*score) return ScoreCmd(ref, hyp, format);
    if (*bench) return BenchCmd(bench_fixture, delay_us, runs, bench_flags);
    if (*gen) {
      SyntheticTask task = GenerateFixture(fixture);
      WriteFixture(task, gen_out);
      std::cout << "utterances=" << task.utterances.size() << "\nvocabulary="
                << task.lexicon.Entries().size() << "\n";
      return 0;
    }
    if (*pipe) {
      pc.chunks = pipe_flags.Chunks();
      pc.beam = pipe_flags.Beam();
      pc.nbest = ChooseNbestSize(pipe_flags.nbest);
      PipelineResult r = RunPipeline(pc);
      for (const std::string &w : r.warnings) LogWarning(w);
      std::cout << r.report.Summary() << "\n" << r.report.KeyValues();
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
