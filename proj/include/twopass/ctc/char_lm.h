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

#ifndef TWOPASS_CTC_CHAR_LM_H_
#define TWOPASS_CTC_CHAR_LM_H_

#include <span>
#include <string>
#include <vector>

#include "twopass/ctc/posterior.h"
#include "twopass/graph/arpa.h"
#include "twopass/graph/lexicon.h"

namespace twopass {

// Index 0 of a next-label distribution is end-of-sequence; index k >= 1 is
// unit k.
inline constexpr Label kEndOfSequence = 0;

// Label-level language model used for shallow fusion. Implementations must
// be safe to call concurrently.
class CharLmScorer {
 public:
  virtual ~CharLmScorer() = default;
  // Size of the distribution returned by NextLogProbs (token count).
  virtual int NumLabels() const = 0;
  // Normalized log-probabilities of each next label given `prefix`.
  virtual std::vector<double> NextLogProbs(std::span<const Label> prefix) const = 0;
};

class UniformCharLm : public CharLmScorer {
 public:
  explicit UniformCharLm(int num_labels) : num_labels_(num_labels) {}
  int NumLabels() const override { return num_labels_; }
  std::vector<double> NextLogProbs(std::span<const Label> prefix) const override;

 private:
  int num_labels_;
};

// Character n-gram LM over the unit inventory, read from an ARPA model whose
// words are unit symbols. Probabilities follow ARPA backoff and are
// renormalized over the units plus "</s>".
class NgramCharLm : public CharLmScorer {
 public:
  NgramCharLm(ArpaModel arpa, TokenInventory inventory);
  int NumLabels() const override { return inventory_.Size(); }
  std::vector<double> NextLogProbs(std::span<const Label> prefix) const override;

 private:
  ArpaModel arpa_;
  TokenInventory inventory_;
};

}  // namespace twopass

#endif  // TWOPASS_CTC_CHAR_LM_H_
