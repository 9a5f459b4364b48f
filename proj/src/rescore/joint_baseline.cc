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

#include "twopass/rescore/joint_baseline.h"

#include <algorithm>
#include <cmath>

#include "twopass/ctc/prefix_score.h"
#include "twopass/error.h"

namespace twopass {
namespace {

struct Hyp {
  LabelSequence labels;
  CtcPrefixScorer::State ctc;
  double seq = 0.0;  // sum log p_seq
  double lm = 0.0;   // sum log p_lm
  double score = 0.0;
};

struct Candidate {
  size_t parent;
  Label label;
  double ctc;
  double score;
};

}  // namespace

void JointSearchOptions::Validate() const {
  if (beam < 1) throw ConfigError("joint search: beam must be >= 1");
  if (!(ctc_weight >= 0.0 && ctc_weight <= 1.0)) {
    throw ConfigError("joint search: ctc_weight must be in [0, 1]");
  }
  if (!std::isfinite(lm_weight) || lm_weight < 0) {
    throw ConfigError("joint search: lm_weight must be finite and non-negative");
  }
}

JointSearchResult JointBeamSearch(const PosteriorMatrix &post, const SequenceScorer &scorer,
                                  const ScorerHandle &handle, const JointSearchOptions &options,
                                  const CharLmScorer *lm) {
  options.Validate();
  const int num_labels = post.NumTokens();
  if (scorer.NumLabels() != num_labels) {
    throw ConfigError("joint search: scorer has " + std::to_string(scorer.NumLabels()) +
                      " labels, posteriors have " + std::to_string(num_labels));
  }
  if (lm && options.lm_weight != 0.0 && lm->NumLabels() != num_labels) {
    throw ConfigError("joint search: LM label count does not match posteriors");
  }
  const bool use_lm = lm && options.lm_weight != 0.0;
  const double wc = options.ctc_weight, ws = 1.0 - options.ctc_weight, wl = options.lm_weight;
  // Zero-weight terms are skipped so that an impossible label under a
  // switched-off model does not poison the sum.
  auto fuse = [&](double ctc, double seq, double lmv) {
    double s = 0.0;
    if (wc != 0.0) s += wc * ctc;
    if (ws != 0.0) s += ws * seq;
    if (use_lm) s += wl * lmv;
    return s;
  };

  CtcPrefixScorer ctc(post);
  std::vector<Hyp> live(1);
  live[0].ctc = ctc.Initial();
  JointSearchResult result;

  while (!live.empty()) {
    std::vector<Candidate> candidates;
    std::vector<std::vector<double>> seq_dists(live.size()), lm_dists(live.size());
    for (size_t i = 0; i < live.size(); ++i) {
      const Hyp &h = live[i];
      seq_dists[i] = scorer.NextTokenLogProbs(handle, h.labels);
      ++result.scorer_calls;
      if (use_lm) lm_dists[i] = lm->NextLogProbs(h.labels);
      double end_ctc = ctc.FinalLogProb(h.ctc);
      double end = fuse(end_ctc, h.seq + seq_dists[i][kEndOfSequence],
                        use_lm ? h.lm + lm_dists[i][kEndOfSequence] : 0.0);
      if (end_ctc != kLogZero && end > result.score) {
        result.score = end;
        result.labels = h.labels;
      }
      for (Label c = 1; c < num_labels; ++c) {
        double c_ctc = ctc.ExtendScore(h.ctc, c);
        if (c_ctc == kLogZero) continue;
        double s = fuse(c_ctc, h.seq + seq_dists[i][c], use_lm ? h.lm + lm_dists[i][c] : 0.0);
        if (s == kLogZero || std::isnan(s)) continue;
        candidates.push_back({i, c, c_ctc, s});
      }
    }
    ++result.steps;
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate &a, const Candidate &b) { return a.score > b.score; });
    if (candidates.size() > static_cast<size_t>(options.beam)) candidates.resize(options.beam);
    // Scores never increase along a prefix, so nothing live can still win.
    if (candidates.empty() || candidates.front().score <= result.score) break;
    std::vector<Hyp> next;
    next.reserve(candidates.size());
    for (const Candidate &c : candidates) {
      const Hyp &p = live[c.parent];
      Hyp h;
      h.labels = p.labels;
      h.labels.push_back(c.label);
      h.ctc = ctc.Extend(p.ctc, c.label);
      h.seq = p.seq + seq_dists[c.parent][c.label];
      h.lm = use_lm ? p.lm + lm_dists[c.parent][c.label] : 0.0;
      h.score = c.score;
      next.push_back(std::move(h));
    }
    live = std::move(next);
  }
  return result;
}

}  // namespace twopass
