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

#include "twopass/rescore/rescorer.h"

#include <algorithm>
#include <cmath>
#include <omp.h>

#include "twopass/error.h"

namespace twopass {
namespace {

struct Scored {
  double rescore = 0.0;
  std::string error;  // non-empty when dropped
};

Scored ScoreOne(const Hypothesis &h, const SequenceScorer &scorer, const ScorerHandle &handle) {
  Scored s;
  try {
    s.rescore = -SequenceLogProb(scorer, handle, h.units);
    if (std::isnan(s.rescore)) s.error = "scorer returned NaN";
  } catch (const std::exception &e) {
    s.error = e.what();
  }
  return s;
}

RescoreResult Fuse(const NBestList &nbest, const std::vector<Scored> &scored,
                   const RescoreOptions &options) {
  RescoreResult result;
  for (size_t i = 0; i < nbest.size(); ++i) {
    const Hypothesis &h = nbest[i];
    if (!scored[i].error.empty()) {
      result.dropped.push_back("hypothesis " + std::to_string(i) + ": " + scored[i].error);
      continue;
    }
    FusedHypothesis f;
    f.words = h.words;
    f.units = h.units;
    f.graph_cost = h.graph_cost;
    f.acoustic_cost = h.acoustic_cost;
    f.first_pass_score = options.graph_only ? h.graph_cost : h.Cost();
    f.rescore = scored[i].rescore;
    f.first_pass_rank = static_cast<int>(i);
    // A zero weight removes its term entirely, so an infinite cost there
    // cannot turn the sum into NaN.
    double total = 0.0;
    if (options.alpha != 0.0) total += options.alpha * f.first_pass_score;
    if (options.beta != 0.0) total += options.beta * f.rescore;
    f.final_score = total;
    result.ranked.push_back(std::move(f));
  }
  if (result.ranked.empty()) {
    throw EmptyResultError("rescore: every hypothesis was dropped (" +
                               (result.dropped.empty() ? std::string("empty n-best")
                                                       : result.dropped.front()) +
                               ")",
                           {});
  }
  std::stable_sort(result.ranked.begin(), result.ranked.end(),
                   [](const FusedHypothesis &a, const FusedHypothesis &b) {
                     return a.final_score < b.final_score;
                   });
  return result;
}

}  // namespace

int ChooseNbestSize(std::optional<int> configured) {
  int n = configured.value_or(kDefaultNbestSize);
  if (n < 1) throw ConfigError("n-best size must be >= 1, got " + std::to_string(n));
  return n;
}

void RescoreOptions::Validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0 || beta < 0) {
    throw ConfigError("rescore: alpha and beta must be finite and non-negative");
  }
}

RescoreResult RescoreNbest(const NBestList &nbest, const SequenceScorer &scorer,
                           const ScorerHandle &handle, const RescoreOptions &options) {
  options.Validate();
  std::vector<Scored> scored;
  scored.reserve(nbest.size());
  for (const Hypothesis &h : nbest) scored.push_back(ScoreOne(h, scorer, handle));
  return Fuse(nbest, scored, options);
}

RescoreResult RescoreNbestParallel(const NBestList &nbest, const SequenceScorer &scorer,
                                   const ScorerHandle &handle, const RescoreOptions &options,
                                   int num_threads) {
  options.Validate();
  std::vector<Scored> scored(nbest.size());
  const int n = static_cast<int>(nbest.size());
  const int threads = num_threads > 0 ? num_threads : omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) scored[i] = ScoreOne(nbest[i], scorer, handle);
  return Fuse(nbest, scored, options);
}

}  // namespace twopass
