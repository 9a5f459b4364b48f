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

#ifndef TWOPASS_EVAL_PIPELINE_H_
#define TWOPASS_EVAL_PIPELINE_H_

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twopass/decoder/stream_decoder.h"
#include "twopass/eval/cer.h"
#include "twopass/graph/lexicon.h"
#include "twopass/rescore/rescorer.h"

namespace twopass {

struct PipelineConfig {
  // Build inputs. When `graph` names an existing compiled graph the build
  // stage loads it instead.
  std::string units;
  std::string lexicon;
  std::string arpa;
  std::string graph;

  std::string posteriors;  // directory of <utt>.post files
  std::string refs;        // "utt_id<TAB>text"
  std::string scorer = "none";  // none | table:FILE | chararpa:FILE
  double table_confidence = 0.9;
  std::string trace;  // optional n-best trace output path

  std::optional<ChunkConfig> chunks;  // single-shot decoding when unset
  BeamConfig beam;
  int nbest = kDefaultNbestSize;
  RescoreOptions rescore;
  int threads = 1;
};

struct UtteranceTrace {
  std::string utt;
  std::string reference;
  std::string hypothesis;
  NBestList nbest;
  std::optional<RescoreResult> rescored;
  std::string error;  // decoder failure; the hypothesis is then the best partial one
};

struct PipelineResult {
  EvalReport report;
  std::vector<UtteranceTrace> traces;
  std::vector<std::string> warnings;
  double audio_ms = 0.0;
  double decode_ms = 0.0;
  double rescore_ms = 0.0;
};

// build -> decode -> rescore -> score. Failures are rethrown as StageError
// tagged with the stage name.
PipelineResult RunPipeline(const PipelineConfig &config);

// Parses a scorer spec: "table:FILE" (references, see TableSequenceScorer)
// or "chararpa:FILE" (character ARPA model over the units). "none" yields
// null.
std::shared_ptr<const SequenceScorer> MakeSequenceScorer(const std::string &spec,
                                                         const TokenInventory &inventory,
                                                         double table_confidence = 0.9);

// (utt_id, path) for every *.post file in `dir`, sorted by utterance id.
std::vector<std::pair<std::string, std::string>> ListPosteriorFiles(const std::string &dir);

}  // namespace twopass

#endif  // TWOPASS_EVAL_PIPELINE_H_
