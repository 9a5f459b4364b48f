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

#include "twopass/rescore/sequence_scorer.h"

#include <cmath>
#include <fstream>
#include <thread>

#include "twopass/error.h"
#include "twopass/text.h"

namespace twopass {
namespace {

class TableContext : public ScorerContext {
 public:
  explicit TableContext(const LabelSequence *ref) : ref(ref) {}
  const LabelSequence *ref;  // null for unknown utterances
};

}  // namespace

TableSequenceScorer::TableSequenceScorer(std::map<std::string, LabelSequence> references,
                                         int num_labels, double confidence)
    : references_(std::move(references)), num_labels_(num_labels), confidence_(confidence) {
  if (num_labels_ < 2) throw ConfigError("table scorer: need at least one unit");
  if (!(confidence_ > 0.0 && confidence_ < 1.0)) {
    throw ConfigError("table scorer: confidence must be in (0, 1)");
  }
  for (const auto &[utt, ref] : references_) {
    for (Label l : ref) {
      if (l < 1 || l >= num_labels_) {
        throw ConfigError("table scorer: label " + std::to_string(l) + " out of range in " + utt);
      }
    }
  }
}

TableSequenceScorer TableSequenceScorer::FromFile(const std::string &path,
                                                  const TokenInventory &inventory,
                                                  double confidence) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::map<std::string, LabelSequence> refs;
  std::string line;
  while (std::getline(in, line)) {
    if (StripWhitespace(line).empty()) continue;
    size_t tab = line.find('\t');
    std::string utt = line.substr(0, tab);
    std::string text = tab == std::string::npos ? "" : line.substr(tab + 1);
    LabelSequence labels;
    for (const std::string &ch : SplitUtf8(StripWhitespace(text))) {
      int id = inventory.Id(ch);
      if (id < 1) throw ConfigError("table scorer: character '" + ch + "' of " + utt + " is not a unit");
      labels.push_back(id);
    }
    refs[utt] = std::move(labels);
  }
  return TableSequenceScorer(std::move(refs), inventory.Size(), confidence);
}

ScorerHandle TableSequenceScorer::Prepare(const UtteranceContext &utt) const {
  auto it = references_.find(utt.utt_id);
  return std::make_shared<TableContext>(it == references_.end() ? nullptr : &it->second);
}

std::vector<double> TableSequenceScorer::NextTokenLogProbs(const ScorerHandle &handle,
                                                           std::span<const Label> prefix) const {
  const auto *ctx = dynamic_cast<const TableContext *>(handle.get());
  if (!ctx) throw PreconditionError("table scorer: handle from another scorer");
  const LabelSequence *ref = ctx->ref;
  bool on_path = ref && prefix.size() <= ref->size() &&
                 std::equal(prefix.begin(), prefix.end(), ref->begin());
  if (!on_path) return std::vector<double>(num_labels_, -std::log(static_cast<double>(num_labels_)));
  Label target = prefix.size() == ref->size() ? kEndOfSequence : (*ref)[prefix.size()];
  std::vector<double> out(num_labels_, std::log((1.0 - confidence_) / (num_labels_ - 1)));
  out[target] = std::log(confidence_);
  return out;
}

std::vector<double> TableSequenceScorer::ScoreSequence(const ScorerHandle &handle,
                                                       std::span<const Label> labels) const {
  std::vector<double> out;
  out.reserve(labels.size() + 1);
  for (size_t l = 0; l <= labels.size(); ++l) {
    Label next = l < labels.size() ? labels[l] : kEndOfSequence;
    if (next < 0 || next >= num_labels_) {
      throw PreconditionError("table scorer: label " + std::to_string(next) + " out of range");
    }
    out.push_back(NextTokenLogProbs(handle, labels.first(l))[next]);
  }
  return out;
}

std::vector<double> CharLmSequenceScorer::ScoreSequence(const ScorerHandle &,
                                                        std::span<const Label> labels) const {
  std::vector<double> out;
  out.reserve(labels.size() + 1);
  for (size_t l = 0; l <= labels.size(); ++l) {
    Label next = l < labels.size() ? labels[l] : kEndOfSequence;
    if (next < 0 || next >= lm_->NumLabels()) {
      throw PreconditionError("char lm scorer: label " + std::to_string(next) + " out of range");
    }
    out.push_back(lm_->NextLogProbs(labels.first(l))[next]);
  }
  return out;
}

ScorerHandle InstrumentedScorer::Prepare(const UtteranceContext &utt) const {
  ++prepare_calls_;
  return inner_->Prepare(utt);
}

void InstrumentedScorer::Wait() const {
  if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
}

std::vector<double> InstrumentedScorer::ScoreSequence(const ScorerHandle &handle,
                                                      std::span<const Label> labels) const {
  ++sequence_calls_;
  Wait();
  return inner_->ScoreSequence(handle, labels);
}

std::vector<double> InstrumentedScorer::NextTokenLogProbs(const ScorerHandle &handle,
                                                          std::span<const Label> prefix) const {
  ++step_calls_;
  Wait();
  return inner_->NextTokenLogProbs(handle, prefix);
}

void InstrumentedScorer::ResetCounts() {
  prepare_calls_ = 0;
  sequence_calls_ = 0;
  step_calls_ = 0;
}

double SequenceLogProb(const SequenceScorer &scorer, const ScorerHandle &handle,
                       std::span<const Label> labels) {
  double total = 0.0;
  for (double lp : scorer.ScoreSequence(handle, labels)) total += lp;
  return total;
}

LabelSequence WordsToUnits(const std::vector<std::string> &words, const TokenInventory &inventory) {
  LabelSequence out;
  for (const std::string &w : words) {
    for (const std::string &ch : SplitUtf8(w)) {
      int id = inventory.Id(ch);
      if (id < 1) throw ConfigError("character '" + ch + "' of word '" + w + "' is not a unit");
      out.push_back(id);
    }
  }
  return out;
}

}  // namespace twopass
