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

#ifndef TWOPASS_RESCORE_JOINT_BASELINE_H_
#define TWOPASS_RESCORE_JOINT_BASELINE_H_

#include <cstddef>

#include "twopass/ctc/char_lm.h"
#include "twopass/ctc/posterior.h"
#include "twopass/rescore/sequence_scorer.h"

namespace twopass {

struct JointSearchOptions {
  int beam = 10;
  double ctc_weight = 0.5;
  double lm_weight = 0.3;

  void Validate() const;
};

struct JointSearchResult {
  LabelSequence labels;
  double score = kLogZero;  // fused log score of the returned hypothesis
  size_t scorer_calls = 0;  // NextTokenLogProbs invocations
  int steps = 0;
};

// Label-synchronous joint CTC / sequence-model beam search. Every live
// prefix costs one NextTokenLogProbs call per step. A hypothesis scores
//   ctc_weight * log P_ctc + (1 - ctc_weight) * sum log p_seq + lm_weight * sum log p_lm
// where the CTC term is the prefix probability while the hypothesis is open
// and the full-sequence probability once it ends. Every term is
// non-increasing in the prefix length, so the search stops as soon as the
// best ended hypothesis outscores every live one.
JointSearchResult JointBeamSearch(const PosteriorMatrix &post, const SequenceScorer &scorer,
                                  const ScorerHandle &handle, const JointSearchOptions &options,
                                  const CharLmScorer *lm = nullptr);

}  // namespace twopass

#endif  // TWOPASS_RESCORE_JOINT_BASELINE_H_
