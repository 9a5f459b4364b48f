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

#ifndef TWOPASS_CTC_PREFIX_SCORE_H_
#define TWOPASS_CTC_PREFIX_SCORE_H_

#include <span>
#include <vector>

#include "twopass/ctc/posterior.h"

namespace twopass {

// Incremental CTC prefix probabilities for label-synchronous (autoregressive)
// search. For a prefix h the state keeps, per frame t, the log-probability
// that frames 0..t collapse exactly to h ending in a non-blank or a blank.
class CtcPrefixScorer {
 public:
  struct State {
    std::vector<double> nonblank;
    std::vector<double> blank;
    double log_prefix_prob = 0.0;  // log P(output starts with h)
    Label last = kNoLabel;
    size_t length = 0;
  };

  explicit CtcPrefixScorer(const PosteriorMatrix &post) : post_(post) {}

  State Initial() const;
  State Extend(const State &prefix, Label label) const;
  // log P(output starts with h + label) without building the new state.
  double ExtendScore(const State &prefix, Label label) const;
  // log P(output == h).
  double FinalLogProb(const State &prefix) const;

 private:
  const PosteriorMatrix &post_;
};

struct CtcPrefixResult {
  double log_prob = 0.0;  // kLogZero for infeasible prefixes
  CtcPrefixScorer::State state;
};

CtcPrefixResult CtcPrefixScore(const PosteriorMatrix &post, std::span<const Label> prefix);

}  // namespace twopass

#endif  // TWOPASS_CTC_PREFIX_SCORE_H_
