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

#ifndef TWOPASS_RESCORE_SEQUENCE_SCORER_H_
#define TWOPASS_RESCORE_SEQUENCE_SCORER_H_

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "twopass/ctc/char_lm.h"
#include "twopass/ctc/posterior.h"
#include "twopass/graph/lexicon.h"

namespace twopass {

struct UtteranceContext {
  std::string utt_id;
  const PosteriorMatrix *posteriors = nullptr;  // may be null
};

// Opaque per-utterance state produced by SequenceScorer::Prepare.
class ScorerContext {
 public:
  virtual ~ScorerContext() = default;
};
using ScorerHandle = std::shared_ptr<const ScorerContext>;

// Label-sequence model p(y_l | y_1..y_{l-1}, context). Distributions have
// NumLabels() entries: index 0 is end-of-sequence, index k >= 1 is unit k.
// Calls must be independent of each other and safe to run concurrently.
class SequenceScorer {
 public:
  virtual ~SequenceScorer() = default;
  virtual int NumLabels() const = 0;
  virtual ScorerHandle Prepare(const UtteranceContext &utt) const = 0;
  // Teacher forcing: log p(y_l | y_<l) for every position followed by the
  // end-of-sequence term, labels.size() + 1 values, in one call.
  virtual std::vector<double> ScoreSequence(const ScorerHandle &handle,
                                            std::span<const Label> labels) const = 0;
  // One autoregressive step: the next-label distribution after `prefix`.
  virtual std::vector<double> NextTokenLogProbs(const ScorerHandle &handle,
                                                std::span<const Label> prefix) const = 0;
};

// Fixture scorer that knows each utterance's reference. While the prefix
// agrees with the reference it puts `confidence` on the next reference label
// (or end-of-sequence once the reference is complete) and spreads the rest
// uniformly; off the reference every label is equally likely.
class TableSequenceScorer : public SequenceScorer {
 public:
  TableSequenceScorer(std::map<std::string, LabelSequence> references, int num_labels,
                      double confidence = 0.9);
  // "utt_id<TAB>characters" lines; characters are mapped through `inventory`
  // after removing whitespace.
  static TableSequenceScorer FromFile(const std::string &path, const TokenInventory &inventory,
                                      double confidence = 0.9);

  int NumLabels() const override { return num_labels_; }
  ScorerHandle Prepare(const UtteranceContext &utt) const override;
  std::vector<double> ScoreSequence(const ScorerHandle &handle,
                                    std::span<const Label> labels) const override;
  std::vector<double> NextTokenLogProbs(const ScorerHandle &handle,
                                        std::span<const Label> prefix) const override;

 private:
  std::map<std::string, LabelSequence> references_;
  int num_labels_;
  double confidence_;
};

// Adapts a context-free character LM.
class CharLmSequenceScorer : public SequenceScorer {
 public:
  explicit CharLmSequenceScorer(std::shared_ptr<const CharLmScorer> lm) : lm_(std::move(lm)) {}

  int NumLabels() const override { return lm_->NumLabels(); }
  ScorerHandle Prepare(const UtteranceContext &) const override { return nullptr; }
  std::vector<double> ScoreSequence(const ScorerHandle &handle,
                                    std::span<const Label> labels) const override;
  std::vector<double> NextTokenLogProbs(const ScorerHandle &,
                                        std::span<const Label> prefix) const override {
    return lm_->NextLogProbs(prefix);
  }

 private:
  std::shared_ptr<const CharLmScorer> lm_;
};

// Counts calls to a wrapped scorer and optionally sleeps a fixed time per
// ScoreSequence / NextTokenLogProbs call to stand in for an expensive
// network.
class InstrumentedScorer : public SequenceScorer {
 public:
  InstrumentedScorer(std::shared_ptr<const SequenceScorer> inner,
                     std::chrono::microseconds delay = std::chrono::microseconds(0))
      : inner_(std::move(inner)), delay_(delay) {}

  int NumLabels() const override { return inner_->NumLabels(); }
  ScorerHandle Prepare(const UtteranceContext &utt) const override;
  std::vector<double> ScoreSequence(const ScorerHandle &handle,
                                    std::span<const Label> labels) const override;
  std::vector<double> NextTokenLogProbs(const ScorerHandle &handle,
                                        std::span<const Label> prefix) const override;

  size_t PrepareCalls() const { return prepare_calls_; }
  size_t SequenceCalls() const { return sequence_calls_; }
  size_t StepCalls() const { return step_calls_; }
  size_t TotalCalls() const { return sequence_calls_ + step_calls_; }
  void ResetCounts();

 private:
  void Wait() const;

  std::shared_ptr<const SequenceScorer> inner_;
  std::chrono::microseconds delay_;
  mutable std::atomic<size_t> prepare_calls_{0};
  mutable std::atomic<size_t> sequence_calls_{0};
  mutable std::atomic<size_t> step_calls_{0};
};

// Sum of the log-probabilities returned by ScoreSequence.
double SequenceLogProb(const SequenceScorer &scorer, const ScorerHandle &handle,
                       std::span<const Label> labels);

// Maps words to unit ids character by character (UTF-8 code points).
// Throws ConfigError on a character that is not a unit.
LabelSequence WordsToUnits(const std::vector<std::string> &words, const TokenInventory &inventory);

}  // namespace twopass

#endif  // TWOPASS_RESCORE_SEQUENCE_SCORER_H_
