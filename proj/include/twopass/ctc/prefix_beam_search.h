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

#ifndef TWOPASS_CTC_PREFIX_BEAM_SEARCH_H_
#define TWOPASS_CTC_PREFIX_BEAM_SEARCH_H_

#include <vector>

#include "twopass/ctc/char_lm.h"
#include "twopass/ctc/posterior.h"

namespace twopass {

inline constexpr int kDefaultBeam = 10;
inline constexpr double kDefaultLmWeight = 0.3;

struct CtcHypothesis {
  LabelSequence labels;
  double ctc_log_prob = kLogZero;  // log P(output == labels)
  double lm_log_prob = 0.0;        // unweighted LM log-prob including end-of-sequence
  double score = kLogZero;         // ctc_log_prob + lm_weight * lm_log_prob
};

struct PrefixBeamOptions {
  int beam = kDefaultBeam;
  double lm_weight = kDefaultLmWeight;
};

// CTC prefix beam search keeping blank and non-blank ending probabilities
// per prefix. With an LM, every label extension adds lm_weight times the LM
// log-probability (shallow fusion) and end-of-sequence is added at the end.
// Prefixes are pruned by fused score; ties go to the lexicographically
// smaller label sequence. Results are sorted by descending score.
std::vector<CtcHypothesis> PrefixBeamSearch(const PosteriorMatrix &post,
                                            const PrefixBeamOptions &opts = {},
                                            const CharLmScorer *lm = nullptr);

// Best-path decoding: argmax per frame, then collapse.
LabelSequence GreedyDecode(const PosteriorMatrix &post);

}  // namespace twopass

#endif  // TWOPASS_CTC_PREFIX_BEAM_SEARCH_H_
