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

#include "twopass/ctc/prefix_score.h"

namespace twopass {

CtcPrefixScorer::State CtcPrefixScorer::Initial() const {
  const int T = post_.NumFrames();
  State s;
  s.nonblank.assign(T, kLogZero);
  s.blank.assign(T, kLogZero);
  double acc = 0.0;
  for (int t = 0; t < T; ++t) {
    acc += post_(t, 0);
    s.blank[t] = acc;
  }
  s.log_prefix_prob = 0.0;
  return s;
}

CtcPrefixScorer::State CtcPrefixScorer::Extend(const State &h, Label c) const {
  const int T = post_.NumFrames();
  State s;
  s.last = c;
  s.length = h.length + 1;
  s.nonblank.assign(T, kLogZero);
  s.blank.assign(T, kLogZero);
  if (T == 0) {
    s.log_prefix_prob = kLogZero;
    return s;
  }
  s.nonblank[0] = h.length == 0 ? post_(0, c) : kLogZero;
  double psi = s.nonblank[0];
  for (int t = 1; t < T; ++t) {
    double phi = h.blank[t - 1];
    if (c != h.last) phi = LogAdd(phi, h.nonblank[t - 1]);
    double nb = LogAdd(s.nonblank[t - 1], phi);
    s.nonblank[t] = nb == kLogZero ? kLogZero : nb + post_(t, c);
    double b = LogAdd(s.blank[t - 1], s.nonblank[t - 1]);
    s.blank[t] = b == kLogZero ? kLogZero : b + post_(t, 0);
    if (phi != kLogZero) psi = LogAdd(psi, phi + post_(t, c));
  }
  s.log_prefix_prob = psi;
  return s;
}

double CtcPrefixScorer::ExtendScore(const State &h, Label c) const {
  const int T = post_.NumFrames();
  if (T == 0) return kLogZero;
  double psi = h.length == 0 ? post_(0, c) : kLogZero;
  for (int t = 1; t < T; ++t) {
    double phi = h.blank[t - 1];
    if (c != h.last) phi = LogAdd(phi, h.nonblank[t - 1]);
    if (phi != kLogZero) psi = LogAdd(psi, phi + post_(t, c));
  }
  return psi;
}

double CtcPrefixScorer::FinalLogProb(const State &h) const {
  const int T = post_.NumFrames();
  if (T == 0) return h.length == 0 ? 0.0 : kLogZero;
  return LogAdd(h.nonblank[T - 1], h.blank[T - 1]);
}

CtcPrefixResult CtcPrefixScore(const PosteriorMatrix &post, std::span<const Label> prefix) {
  CtcPrefixScorer scorer(post);
  CtcPrefixResult result{0.0, scorer.Initial()};
  for (Label l : prefix) {
    result.state = scorer.Extend(result.state, l);
    result.log_prob = result.state.log_prefix_prob;
  }
  return result;
}

}  // namespace twopass
