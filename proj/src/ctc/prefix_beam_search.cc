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

#include "twopass/ctc/prefix_beam_search.h"

#include <algorithm>
#include <map>

#include "twopass/error.h"

namespace twopass {
namespace {

struct PrefixEntry {
  double blank = kLogZero;
  double nonblank = kLogZero;
  double lm = 0.0;  // lm_weight * accumulated LM log-prob over labels

  double Ctc() const { return LogAdd(blank, nonblank); }
  double Score() const { return Ctc() + lm; }
};

using Beam = std::map<LabelSequence, PrefixEntry>;

// Keeps the `beam` best prefixes; ties go to the smaller label sequence
// because the map iterates in lexicographic order and the sort is stable.
Beam Prune(const Beam &all, int beam) {
  std::vector<Beam::const_iterator> order;
  order.reserve(all.size());
  for (auto it = all.begin(); it != all.end(); ++it)
    if (it->second.Score() != kLogZero) order.push_back(it);
  std::stable_sort(order.begin(), order.end(), [](auto a, auto b) {
    return a->second.Score() > b->second.Score();
  });
  if (static_cast<int>(order.size()) > beam) order.resize(beam);
  Beam kept;
  for (auto it : order) kept.insert(*it);
  return kept;
}

}  // namespace

std::vector<CtcHypothesis> PrefixBeamSearch(const PosteriorMatrix &post, const PrefixBeamOptions &opts,
                                            const CharLmScorer *lm) {
  if (opts.beam < 1) throw ConfigError("beam must be at least 1");
  const bool use_lm = lm != nullptr && opts.lm_weight != 0.0;
  if (use_lm && lm->NumLabels() != post.NumTokens())
    throw ConfigError("character LM size does not match the posterior token count");
  const int K = post.NumTokens();

  Beam beam;
  beam[{}].blank = 0.0;
  std::map<LabelSequence, std::vector<double>> lm_cache;
  auto lm_probs = [&](const LabelSequence &prefix) -> const std::vector<double> & {
    auto it = lm_cache.find(prefix);
    if (it == lm_cache.end()) it = lm_cache.emplace(prefix, lm->NextLogProbs(prefix)).first;
    return it->second;
  };

  for (int t = 0; t < post.NumFrames(); ++t) {
    Beam next;
    for (const auto &[prefix, entry] : beam) {
      const double total = entry.Ctc();
      PrefixEntry &same = next[prefix];
      same.lm = entry.lm;
      same.blank = LogAdd(same.blank, total + post(t, 0));
      const Label last = prefix.empty() ? kNoLabel : prefix.back();
      for (Label c = 1; c < K; ++c) {
        const double y = post(t, c);
        if (c == last) same.nonblank = LogAdd(same.nonblank, entry.nonblank + y);
        double lm_term = 0.0;
        if (use_lm) {
          double lp = lm_probs(prefix)[c];
          if (lp == kLogZero) continue;
          lm_term = opts.lm_weight * lp;
        }
        LabelSequence extended = prefix;
        extended.push_back(c);
        PrefixEntry &ext = next[extended];
        ext.lm = entry.lm + lm_term;
        ext.nonblank = LogAdd(ext.nonblank, (c == last ? entry.blank : total) + y);
      }
    }
    beam = Prune(next, opts.beam);
  }

  std::vector<CtcHypothesis> out;
  for (const auto &[prefix, entry] : beam) {
    CtcHypothesis h;
    h.labels = prefix;
    h.ctc_log_prob = entry.Ctc();
    h.score = entry.Score();
    if (use_lm) {
      double eos = lm_probs(prefix)[kEndOfSequence];
      h.score += opts.lm_weight * eos;
      h.lm_log_prob = (entry.lm + opts.lm_weight * eos) / opts.lm_weight;
    }
    if (h.score != kLogZero) out.push_back(std::move(h));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CtcHypothesis &a, const CtcHypothesis &b) { return a.score > b.score; });
  return out;
}

LabelSequence GreedyDecode(const PosteriorMatrix &post) {
  LabelSequence out;
  int prev = -1;
  for (int t = 0; t < post.NumFrames(); ++t) {
    auto row = post.Row(t);
    int best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    if (best != 0 && best != prev) out.push_back(best);
    prev = best;
  }
  return out;
}

}  // namespace twopass
