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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "test_util.h"
#include "twopass/ctc/char_lm.h"
#include "twopass/ctc/ctc_loss.h"
#include "twopass/ctc/posterior.h"
#include "twopass/ctc/prefix_beam_search.h"
#include "twopass/ctc/prefix_score.h"
#include "twopass/error.h"

using namespace twopass;
using namespace twopass::testing;

namespace {

// Next-label distribution that depends on the previous label only.
class BigramTableLm : public CharLmScorer {
 public:
  BigramTableLm(Rng &rng, int labels) : labels_(labels) {
    for (int h = 0; h < labels; ++h) {
      std::vector<double> row(labels);
      for (double &v : row) v = 3.0 * RandUnit(rng);
      double norm = LogSumExp(row);
      for (double &v : row) v -= norm;
      table_.push_back(row);
    }
  }
  int NumLabels() const override { return labels_; }
  std::vector<double> NextLogProbs(std::span<const Label> prefix) const override {
    return table_[prefix.empty() ? 0 : prefix.back()];
  }

 private:
  int labels_;
  std::vector<std::vector<double>> table_;
};

double LmSequenceLogProb(const CharLmScorer &lm, const LabelSequence &labels) {
  double total = 0.0;
  for (size_t i = 0; i <= labels.size(); ++i) {
    std::span<const Label> prefix(labels.data(), i);
    total += lm.NextLogProbs(prefix)[i < labels.size() ? labels[i] : kEndOfSequence];
  }
  return total;
}

}  // namespace

TEST_CASE("ctc loss matches alignment enumeration") {
  Rng rng(61);
  for (int i = 0; i < 60; ++i) {
    int frames = RandInt(rng, 1, 5), tokens = RandInt(rng, 2, 4);
    PosteriorMatrix post = RandomPosteriors(rng, frames, tokens);
    for (const auto &[labels, lp] : BruteCtcDistribution(post)) {
      CHECK(CtcLoss(post, labels) == doctest::Approx(-lp).epsilon(1e-9));
    }
  }
}

TEST_CASE("ctc gradient matches central differences") {
  Rng rng(62);
  const double h = 1e-5;
  for (int i = 0; i < 30; ++i) {
    int frames = RandInt(rng, 2, 6), tokens = RandInt(rng, 2, 4);
    PosteriorMatrix post = RandomPosteriors(rng, frames, tokens);
    LabelSequence ref;
    for (int k = RandInt(rng, 1, (frames + 1) / 2); k > 0; --k) ref.push_back(RandInt(rng, 1, tokens - 1));
    if (MinimumCtcFrames(ref) > frames) continue;
    CtcLossGradient g = CtcLossAndGradient(post, ref);
    CHECK(g.loss == doctest::Approx(CtcLoss(post, ref)));
    for (int t = 0; t < frames; ++t) {
      for (int k = 0; k < tokens; ++k) {
        PosteriorMatrix plus = post, minus = post;
        plus.At(t, k) += h;
        minus.At(t, k) -= h;
        double fd = (CtcLoss(plus, ref) - CtcLoss(minus, ref)) / (2 * h);
        double an = g.grad[static_cast<size_t>(t) * tokens + k];
        double rel = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-8});
        CHECK(rel <= 1e-4);
      }
    }
  }
}

TEST_CASE("ctc gradient is minus the occupancy") {
  Rng rng(63);
  PosteriorMatrix post = RandomPosteriors(rng, 6, 3);
  LabelSequence ref{1, 2, 2};
  CtcLossGradient g = CtcLossAndGradient(post, ref);
  for (int t = 0; t < 6; ++t) {
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) sum += g.grad[t * 3 + k];
    CHECK(sum == doctest::Approx(-1.0));
  }
}

TEST_CASE("ctc loss errors") {
  Rng rng(64);
  PosteriorMatrix post = RandomPosteriors(rng, 2, 3);
  LabelSequence repeat{1, 1};
  CHECK(MinimumCtcFrames(repeat) == 3);
  CHECK_THROWS_AS(CtcLoss(post, repeat), InfeasibleAlignmentError);
  LabelSequence blank{0};
  CHECK_THROWS_AS(CtcLoss(post, blank), PreconditionError);
  LabelSequence too_big{3};
  CHECK_THROWS_AS(CtcLoss(post, too_big), PreconditionError);
  LabelSequence empty;
  CHECK(CtcLoss(post, empty) == doctest::Approx(-(post(0, 0) + post(1, 0))));
}

TEST_CASE("hybrid loss") {
  CHECK(HybridLoss(2.0, 4.0) == doctest::Approx(0.3 * 2.0 + 0.7 * 4.0));
  CHECK(HybridLoss(2.0, 4.0, 1.0) == 2.0);
  CHECK_THROWS_AS(HybridLoss(1.0, 1.0, 1.5), ConfigError);
}

TEST_CASE("prefix scores match enumeration") {
  Rng rng(65);
  for (int i = 0; i < 40; ++i) {
    int frames = RandInt(rng, 1, 5), tokens = RandInt(rng, 2, 4);
    PosteriorMatrix post = RandomPosteriors(rng, frames, tokens);
    auto dist = BruteCtcDistribution(post);
    // Every prefix of every reachable labelling, plus one unreachable one.
    std::map<LabelSequence, double> prefix_mass;
    for (const auto &[labels, lp] : dist) {
      for (size_t n = 0; n <= labels.size(); ++n) {
        LabelSequence p(labels.begin(), labels.begin() + n);
        auto [it, inserted] = prefix_mass.try_emplace(p, lp);
        if (!inserted) it->second = LogAdd(it->second, lp);
      }
    }
    for (const auto &[prefix, mass] : prefix_mass) {
      CtcPrefixResult r = CtcPrefixScore(post, prefix);
      CHECK(r.log_prob == doctest::Approx(mass).epsilon(1e-9));
      CtcPrefixScorer scorer(post);
      auto it = dist.find(prefix);
      double full = scorer.FinalLogProb(r.state);
      if (it == dist.end()) {
        CHECK(full == kLogZero);
      } else {
        CHECK(full == doctest::Approx(it->second).epsilon(1e-9));
      }
    }
    LabelSequence impossible(frames + 1, 1);
    CHECK(CtcPrefixScore(post, impossible).log_prob == kLogZero);
  }
}

TEST_CASE("incremental extension agrees with direct scoring") {
  Rng rng(66);
  PosteriorMatrix post = RandomPosteriors(rng, 8, 4);
  CtcPrefixScorer scorer(post);
  auto state = scorer.Initial();
  LabelSequence labels;
  for (Label l : {2, 2, 3, 1}) {
    double direct = scorer.ExtendScore(state, l);
    state = scorer.Extend(state, l);
    labels.push_back(l);
    CHECK(state.log_prefix_prob == doctest::Approx(direct));
    CHECK(direct == doctest::Approx(CtcPrefixScore(post, labels).log_prob));
  }
}

TEST_CASE("prefix beam search with an exhaustive beam finds the best labelling") {
  Rng rng(67);
  for (int i = 0; i < 40; ++i) {
    int frames = RandInt(rng, 1, 5), tokens = RandInt(rng, 2, 4);
    PosteriorMatrix post = RandomPosteriors(rng, frames, tokens);
    auto dist = BruteCtcDistribution(post);
    LabelSequence best;
    double best_lp = kLogZero;
    for (const auto &[labels, lp] : dist) {
      if (lp > best_lp) {
        best_lp = lp;
        best = labels;
      }
    }
    auto hyps = PrefixBeamSearch(post, {.beam = 100000, .lm_weight = 0.0});
    REQUIRE(!hyps.empty());
    CHECK(hyps[0].labels == best);
    CHECK(hyps[0].ctc_log_prob == doctest::Approx(best_lp));
  }
}

TEST_CASE("shallow fusion with an exhaustive beam maximizes the fused score") {
  Rng rng(68);
  for (int i = 0; i < 30; ++i) {
    int frames = RandInt(rng, 1, 5), tokens = RandInt(rng, 2, 4);
    PosteriorMatrix post = RandomPosteriors(rng, frames, tokens);
    BigramTableLm lm(rng, tokens);
    const double w = 0.7;
    LabelSequence best;
    double best_score = kLogZero;
    for (const auto &[labels, lp] : BruteCtcDistribution(post)) {
      double s = lp + w * LmSequenceLogProb(lm, labels);
      if (s > best_score) {
        best_score = s;
        best = labels;
      }
    }
    auto hyps = PrefixBeamSearch(post, {.beam = 100000, .lm_weight = w}, &lm);
    REQUIRE(!hyps.empty());
    CHECK(hyps[0].labels == best);
    CHECK(hyps[0].score == doctest::Approx(best_score));
  }
}

TEST_CASE("zero LM weight ignores the LM") {
  Rng rng(69);
  PosteriorMatrix post = RandomPosteriors(rng, 12, 4);
  BigramTableLm lm(rng, 4);
  auto a = PrefixBeamSearch(post, {.beam = 4, .lm_weight = 0.0}, &lm);
  auto b = PrefixBeamSearch(post, {.beam = 4, .lm_weight = 0.0});
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].labels == b[i].labels);
    CHECK(a[i].score == b[i].score);
  }
}

TEST_CASE("greedy decoding collapses the argmax path") {
  std::vector<double> v;
  auto row = [&](int hot) {
    for (int k = 0; k < 3; ++k) v.push_back(k == hot ? std::log(0.8) : std::log(0.1));
  };
  for (int hot : {1, 1, 0, 1, 2, 2, 0}) row(hot);
  PosteriorMatrix post(7, 3, v);
  CHECK(GreedyDecode(post) == LabelSequence{1, 1, 2});
}

TEST_CASE("character n-gram LM is normalized") {
  std::istringstream in(R"(\data\
ngram 1=4
ngram 2=1

\1-grams:
-99	<s>	-0.3
-0.4	a	-0.2
-0.5	b
-0.6	</s>

\2-grams:
-0.1	<s> a

\end\
)");
  NgramCharLm lm(ArpaModel::Parse(in), TokenInventory(std::vector<std::string>{"a", "b"}));
  std::vector<Label> prefix{1, 2};
  for (size_t n = 0; n <= prefix.size(); ++n) {
    auto d = lm.NextLogProbs(std::span<const Label>(prefix.data(), n));
    CHECK(LogSumExp(d) == doctest::Approx(0.0));
  }
  UniformCharLm u(3);
  CHECK(u.NextLogProbs({})[2] == doctest::Approx(-std::log(3.0)));
}

TEST_CASE("posterior matrix I/O and validation") {
  Rng rng(70);
  PosteriorMatrix post = RandomPosteriors(rng, 5, 3);
  std::string dir = MakeTempDir("post");
  post.Write(dir + "/a.post", true);
  post.Write(dir + "/a.txt", false);
  PosteriorMatrix b = PosteriorMatrix::Read(dir + "/a.post");
  PosteriorMatrix t = PosteriorMatrix::Read(dir + "/a.txt");
  REQUIRE(b.NumFrames() == 5);
  REQUIRE(t.NumTokens() == 3);
  for (int f = 0; f < 5; ++f) {
    for (int k = 0; k < 3; ++k) {
      CHECK(b(f, k) == doctest::Approx(post(f, k)).epsilon(1e-6));
      CHECK(t(f, k) == doctest::Approx(post(f, k)).epsilon(1e-6));
    }
  }
  PosteriorMatrix bad(1, 2, {std::log(0.5), std::log(0.6)});
  CHECK_THROWS_AS(bad.Validate(), FormatError);
  bad.Write(dir + "/bad.post");
  CHECK_THROWS_AS(PosteriorMatrix::Read(dir + "/bad.post"), FormatError);
  CHECK_THROWS_AS(PosteriorMatrix::Read(dir + "/none.post"), IoError);
}
