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

#ifndef TWOPASS_RESCORE_RESCORER_H_
#define TWOPASS_RESCORE_RESCORER_H_

#include <optional>
#include <string>
#include <vector>

#include "twopass/decoder/stream_decoder.h"
#include "twopass/rescore/sequence_scorer.h"

namespace twopass {

inline constexpr int kDefaultNbestSize = 5;

// Returns the configured n-best size, or the default of 5. Throws
// ConfigError for values below 1.
int ChooseNbestSize(std::optional<int> configured = std::nullopt);

struct RescoreOptions {
  double alpha = 1.0;  // weight of the first-pass cost
  double beta = 1.0;   // weight of the rescoring cost
  // Fuse only the graph cost of the first pass instead of graph + acoustic.
  bool graph_only = false;

  void Validate() const;
};

struct FusedHypothesis {
  std::vector<Label> words;
  LabelSequence units;
  double graph_cost = 0.0;        // first-pass parts, nats
  double acoustic_cost = 0.0;
  double first_pass_score = 0.0;  // graph + acoustic, or graph only
  double rescore = 0.0;           // -sum log p from the sequence scorer
  double final_score = 0.0;       // alpha * first_pass_score + beta * rescore
  int first_pass_rank = 0;        // 0-based position in the input list
};

struct RescoreResult {
  std::vector<FusedHypothesis> ranked;  // ascending final_score, stable
  std::vector<std::string> dropped;     // one diagnostic per dropped hypothesis
};

// Scores every hypothesis with one teacher-forcing call, fuses and ranks.
// A hypothesis whose scoring throws or returns NaN is dropped; if all are
// dropped, throws EmptyResultError.
RescoreResult RescoreNbest(const NBestList &nbest, const SequenceScorer &scorer,
                           const ScorerHandle &handle, const RescoreOptions &options);

// Same result, scoring hypotheses concurrently with OpenMP.
RescoreResult RescoreNbestParallel(const NBestList &nbest, const SequenceScorer &scorer,
                                   const ScorerHandle &handle, const RescoreOptions &options,
                                   int num_threads = 0);

}  // namespace twopass

#endif  // TWOPASS_RESCORE_RESCORER_H_
