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

#include "twopass/ctc/ctc_loss.h"

#include <string>

#include "twopass/error.h"

namespace twopass {
namespace {

constexpr int kBlank = 0;

struct Lattice {
  std::vector<int> ext;  // blank-interleaved labels, length 2L+1
  std::vector<double> alpha;
  int frames = 0;
  double log_prob = kLogZero;
  double &A(int t, int s) { return alpha[static_cast<size_t>(t) * ext.size() + s]; }
};

void CheckLabels(const PosteriorMatrix &post, std::span<const Label> ref) {
  for (Label l : ref)
    if (l < 1 || l >= post.NumTokens())
      throw PreconditionError("label " + std::to_string(l) + " outside [1, " +
                              std::to_string(post.NumTokens()) + ")");
  if (post.NumFrames() < MinimumCtcFrames(ref))
    throw InfeasibleAlignmentError("reference of length " + std::to_string(ref.size()) + " needs " +
                                   std::to_string(MinimumCtcFrames(ref)) + " frames, got " +
                                   std::to_string(post.NumFrames()));
}

bool CanSkip(const std::vector<int> &ext, size_t s) {
  return ext[s] != kBlank && s >= 2 && ext[s - 2] != ext[s];
}

Lattice Forward(const PosteriorMatrix &post, std::span<const Label> ref) {
  Lattice lat;
  lat.frames = post.NumFrames();
  lat.ext.push_back(kBlank);
  for (Label l : ref) {
    lat.ext.push_back(l);
    lat.ext.push_back(kBlank);
  }
  const size_t S = lat.ext.size();
  if (lat.frames == 0) {
    lat.log_prob = ref.empty() ? 0.0 : kLogZero;
    return lat;
  }
  lat.alpha.assign(static_cast<size_t>(lat.frames) * S, kLogZero);
  lat.A(0, 0) = post(0, lat.ext[0]);
  if (S > 1) lat.A(0, 1) = post(0, lat.ext[1]);
  for (int t = 1; t < lat.frames; ++t) {
    for (size_t s = 0; s < S; ++s) {
      double a = lat.A(t - 1, s);
      if (s >= 1) a = LogAdd(a, lat.A(t - 1, s - 1));
      if (CanSkip(lat.ext, s)) a = LogAdd(a, lat.A(t - 1, s - 2));
      lat.A(t, s) = a == kLogZero ? kLogZero : a + post(t, lat.ext[s]);
    }
  }
  lat.log_prob = lat.A(lat.frames - 1, S - 1);
  if (S > 1) lat.log_prob = LogAdd(lat.log_prob, lat.A(lat.frames - 1, S - 2));
  return lat;
}

}  // namespace

int MinimumCtcFrames(std::span<const Label> ref) {
  int n = static_cast<int>(ref.size());
  for (size_t i = 1; i < ref.size(); ++i)
    if (ref[i] == ref[i - 1]) ++n;
  return n;
}

double CtcLoss(const PosteriorMatrix &post, std::span<const Label> ref) {
  CheckLabels(post, ref);
  return -Forward(post, ref).log_prob;
}

CtcLossGradient CtcLossAndGradient(const PosteriorMatrix &post, std::span<const Label> ref) {
  CheckLabels(post, ref);
  Lattice lat = Forward(post, ref);
  CtcLossGradient out;
  out.loss = -lat.log_prob;
  const int T = lat.frames, K = post.NumTokens();
  out.grad.assign(static_cast<size_t>(T) * K, 0.0);
  if (T == 0 || lat.log_prob == kLogZero) return out;

  const size_t S = lat.ext.size();
  std::vector<double> beta_next(S, kLogZero), beta(S, kLogZero);
  std::vector<double> occupancy(K);
  for (int t = T - 1; t >= 0; --t) {
    for (size_t s = 0; s < S; ++s) {
      double b;
      if (t == T - 1) {
        b = (s + 1 == S || s + 2 == S) ? 0.0 : kLogZero;
      } else {
        b = beta_next[s];
        if (s + 1 < S) b = LogAdd(b, beta_next[s + 1]);
        if (s + 2 < S && CanSkip(lat.ext, s + 2)) b = LogAdd(b, beta_next[s + 2]);
      }
      beta[s] = b == kLogZero ? kLogZero : b + post(t, lat.ext[s]);
    }
    // gamma = alpha * beta / y, both sides include the emission at t.
    std::fill(occupancy.begin(), occupancy.end(), kLogZero);
    for (size_t s = 0; s < S; ++s) {
      double a = lat.A(t, static_cast<int>(s));
      if (a == kLogZero || beta[s] == kLogZero) continue;
      double g = a + beta[s] - post(t, lat.ext[s]) - lat.log_prob;
      occupancy[lat.ext[s]] = LogAdd(occupancy[lat.ext[s]], g);
    }
    for (int k = 0; k < K; ++k)
      out.grad[static_cast<size_t>(t) * K + k] = occupancy[k] == kLogZero ? 0.0 : -std::exp(occupancy[k]);
    std::swap(beta, beta_next);
  }
  return out;
}

double HybridLoss(double ctc_loss, double attention_loss, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw ConfigError("CTC loss weight must lie in [0, 1], got " + std::to_string(lambda));
  return lambda * ctc_loss + (1.0 - lambda) * attention_loss;
}

}  // namespace twopass
