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

#include "twopass/eval/pipeline.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>

#include "twopass/error.h"
#include "twopass/eval/nbest_io.h"
#include "twopass/eval/rtf.h"
#include "twopass/fst/io.h"
#include "twopass/graph/arpa.h"
#include "twopass/graph/builders.h"
#include "twopass/parallel/batch.h"
#include "twopass/text.h"

namespace twopass {
namespace {

using Clock = std::chrono::steady_clock;

// Units recovered from the frame-label symbols of a compiled graph.
TokenInventory InventoryFromGraph(const Wfst &graph, const std::string &path) {
  auto syms = graph.InputSymbols();
  if (!syms) throw FormatError("graph " + path + " has no input symbol table; pass --units");
  std::vector<std::string> units;
  for (Label l = TokenToFrameLabel(1); syms->Contains(l); ++l) units.push_back(syms->Find(l));
  return TokenInventory(units);
}

double ElapsedMs(Clock::time_point begin) {
  return std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
}

template <typename F>
auto Stage(const std::string &name, F &&body) {
  try {
    return body();
  } catch (const StageError &) {
    throw;
  } catch (const std::exception &e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

std::shared_ptr<const SequenceScorer> MakeSequenceScorer(const std::string &spec,
                                                         const TokenInventory &inventory,
                                                         double table_confidence) {
  if (spec.empty() || spec == "none") return nullptr;
  size_t colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string path = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (path.empty()) throw ConfigError("scorer spec '" + spec + "' needs a file: KIND:FILE");
  if (kind == "table") {
    return std::make_shared<TableSequenceScorer>(
        TableSequenceScorer::FromFile(path, inventory, table_confidence));
  }
  if (kind == "chararpa") {
    auto lm = std::make_shared<NgramCharLm>(ArpaModel::Read(path), inventory);
    return std::make_shared<CharLmSequenceScorer>(lm);
  }
  throw ConfigError("unknown scorer kind '" + kind + "' (expected table or chararpa)");
}

std::vector<std::pair<std::string, std::string>> ListPosteriorFiles(const std::string &dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("posterior directory not found: " + dir);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".post") {
      out.emplace_back(entry.path().stem().string(), entry.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

PipelineResult RunPipeline(const PipelineConfig &config) {
  PipelineResult result;

  // build
  std::shared_ptr<const Wfst> graph;
  std::shared_ptr<const SymbolTable> words;
  TokenInventory inventory;
  Stage("build", [&] {
    if (config.chunks) config.chunks->Validate();
    config.beam.Validate();
    config.rescore.Validate();
    ChooseNbestSize(config.nbest);
    if (!config.units.empty()) inventory = TokenInventory::Read(config.units);
    if (!config.graph.empty() && std::filesystem::exists(config.graph)) {
      graph = std::make_shared<const Wfst>(ReadWfst(config.graph));
      words = graph->OutputSymbols();
      if (!words) throw FormatError("graph " + config.graph + " has no word symbol table");
      if (config.units.empty()) inventory = InventoryFromGraph(*graph, config.graph);
    } else {
      if (config.units.empty() || config.lexicon.empty() || config.arpa.empty()) {
        throw ConfigError("need --graph or all of --units, --lexicon and --arpa");
      }
      SearchGraph s = BuildSearchGraph(ArpaModel::Read(config.arpa), Lexicon::Read(config.lexicon),
                                       inventory);
      result.warnings = s.warnings;
      words = s.words;
      graph = std::make_shared<const Wfst>(std::move(s.fst));
      if (!config.graph.empty()) WriteWfst(*graph, config.graph);
    }
    return 0;
  });

  // decode
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<PosteriorMatrix> posts;
  std::vector<DecodeOutcome> outcomes;
  Stage("decode", [&] {
    files = ListPosteriorFiles(config.posteriors);
    if (files.empty()) throw IoError("no .post files in " + config.posteriors);
    for (const auto &[utt, path] : files) {
      posts.push_back(PosteriorMatrix::Read(path));
      result.audio_ms += AudioMs(posts.back().NumFrames(), config.chunks.value_or(ChunkConfig{}));
    }
    BatchDecodeOptions opts;
    opts.chunks = config.chunks;
    opts.beam = config.beam;
    opts.beam.nbest = std::max(opts.beam.nbest, config.nbest);
    opts.nbest = config.nbest;
    auto begin = Clock::now();
    outcomes = config.threads == 1 ? DecodeBatchSerial(graph, posts, opts)
                                   : DecodeBatchParallel(graph, posts, opts, config.threads);
    result.decode_ms = ElapsedMs(begin);
    return 0;
  });

  // rescore
  std::vector<std::optional<RescoreResult>> rescored(files.size());
  Stage("rescore", [&] {
    auto scorer = MakeSequenceScorer(config.scorer, inventory, config.table_confidence);
    if (!scorer) return 0;
    auto begin = Clock::now();
    for (size_t i = 0; i < files.size(); ++i) {
      if (!outcomes[i].ok()) continue;
      UtteranceContext ctx{files[i].first, &posts[i]};
      ScorerHandle handle = scorer->Prepare(ctx);
      rescored[i] = config.threads == 1
                        ? RescoreNbest(outcomes[i].nbest, *scorer, handle, config.rescore)
                        : RescoreNbestParallel(outcomes[i].nbest, *scorer, handle,
                                               config.rescore, config.threads);
      for (const std::string &d : rescored[i]->dropped) {
        result.warnings.push_back(files[i].first + ": dropped " + d);
      }
    }
    result.rescore_ms = ElapsedMs(begin);
    return 0;
  });

  // score
  Stage("score", [&] {
    std::map<std::string, std::string> refs;
    if (!config.refs.empty()) {
      for (auto &[utt, text] : ReadReferences(config.refs)) refs[utt] = text;
    }
    std::ofstream trace;
    if (!config.trace.empty()) {
      trace.open(config.trace);
      if (!trace) throw IoError("cannot write " + config.trace);
    }
    for (size_t i = 0; i < files.size(); ++i) {
      UtteranceTrace t;
      t.utt = files[i].first;
      t.nbest = outcomes[i].nbest;
      t.rescored = rescored[i];
      t.error = outcomes[i].error;
      std::vector<Label> best;
      if (!outcomes[i].ok()) {
        best.assign(outcomes[i].partial_words.begin(), outcomes[i].partial_words.end());
        result.warnings.push_back(t.utt + ": " + t.error);
      } else if (t.rescored) {
        best = t.rescored->ranked.front().words;
      } else {
        best = t.nbest.front().words;
      }
      t.hypothesis = Join(WordStrings(best, *words), " ");
      if (!config.refs.empty()) {
        auto it = refs.find(t.utt);
        if (it == refs.end()) throw FormatError("no reference for " + t.utt);
        t.reference = it->second;
        result.report.Add(CharacterErrors(t.reference, t.hypothesis));
      }
      if (trace.is_open()) {
        auto records = t.rescored ? ToRecords(t.utt, *t.rescored, *words)
                                  : ToRecords(t.utt, t.nbest, *words);
        for (const NbestRecord &r : records) WriteNbestRecord(trace, r);
      }
      result.traces.push_back(std::move(t));
    }
    if (result.audio_ms > 0) {
      result.report.rtf = (result.decode_ms + result.rescore_ms) / result.audio_ms;
    }
    return 0;
  });
  return result;
}

}  // namespace twopass
