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

#ifndef TWOPASS_CTC_CTC_LOSS_H_
#define TWOPASS_CTC_CTC_LOSS_H_

#include <span>
#include <vector>

#include "twopass/ctc/posterior.h"

namespace twopass {

// Frames needed to emit `ref`: one per label plus one blank between equal
// neighbours.
int MinimumCtcFrames(std::span<const Label> ref);

// -ln P(ref | post), summed over all alignments that collapse to `ref`.
// Throws InfeasibleAlignmentError if there are too few frames.
double CtcLoss(const PosteriorMatrix &post, std::span<const Label> ref);

struct CtcLossGradient {
  double loss = 0.0;
  // d loss / d log-posterior, frame-major like the input. Equals minus the
  // per-frame token occupancy.
  std::vector<double> grad;
};

CtcLossGradient CtcLossAndGradient(const PosteriorMatrix &post, std::span<const Label> ref);

inline constexpr double kDefaultCtcLossWeight = 0.3;

// lambda * ctc + (1 - lambda) * attention; lambda must lie in [0, 1].
double HybridLoss(double ctc_loss, double attention_loss, double lambda = kDefaultCtcLossWeight);

}  // namespace twopass

#endif  // TWOPASS_CTC_CTC_LOSS_H_
