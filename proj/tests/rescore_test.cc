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

#include <algorithm>
#include <cmath>

#include "test_util.h"
#include "twopass/ctc/ctc_loss.h"
#include "twopass/error.h"
#include "twopass/rescore/joint_baseline.h"
#include "twopass/rescore/rescorer.h"
#include "twopass/rescore/sequence_scorer.h"

using namespace twopass;
using namespace twopass::testing;

namespace {

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

// Fails on hypotheses containing a chosen label.
class PickyScorer : public SequenceScorer {
 public:
  PickyScorer(std::shared_ptr<const SequenceScorer> inner, Label bad) : inner_(inner), bad_(bad) {}
  int NumLabels() const override { return inner_->NumLabels(); }
  ScorerHandle Prepare(const UtteranceContext &u) const override { return inner_->Prepare(u); }
  std::vector<double> ScoreSequence(const ScorerHandle &h, std::span<const Label> l) const override {
    for (Label x : l) {
      if (x == bad_) throw std::runtime_error("cannot score label " + std::to_string(bad_));
    }
    return inner_->ScoreSequence(h, l);
  }
  std::vector<double> NextTokenLogProbs(const ScorerHandle &h, std::span<const Label> p) const override {
    return inner_->NextTokenLogProbs(h, p);
  }

 private:
  std::shared_ptr<const SequenceScorer> inner_;
  Label bad_;
};

NBestList RandomNbest(Rng &rng, int n, int labels) {
  NBestList out;
  for (int i = 0; i < n; ++i) {
    Hypothesis h;
    for (int k = RandInt(rng, 1, 5); k > 0; --k) h.units.push_back(RandInt(rng, 1, labels - 1));
    h.words = {i + 1};
    h.graph_cost = 5.0 * RandUnit(rng);
    h.acoustic_cost = 5.0 * RandUnit(rng);
    out.push_back(h);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Hypothesis &a, const Hypothesis &b) { return a.Cost() < b.Cost(); });
  return out;
}

double BruteFusedScore(const PosteriorMatrix &post, const CharLmScorer &seq, const LabelSequence &y,
                       double ctc_weight) {
  double ctc = -CtcLoss(post, y);
  double s = 0.0;
  for (size_t i = 0; i <= y.size(); ++i) {
    s += seq.NextLogProbs(std::span<const Label>(y.data(), i))[i < y.size() ? y[i] : kEndOfSequence];
  }
  return ctc_weight * ctc + (1 - ctc_weight) * s;
}

}  // namespace

TEST_CASE("table scorer distributions") {
  TableSequenceScorer t({{"u1", {1, 2}}}, 4, 0.9);
  ScorerHandle h = t.Prepare({"u1", nullptr});
  std::vector<Label> prefix{1};
  auto on = t.NextTokenLogProbs(h, prefix);
  CHECK(LogSumExp(on) == doctest::Approx(0.0));
  CHECK(on[2] == doctest::Approx(std::log(0.9)));
  std::vector<Label> full{1, 2};
  CHECK(t.NextTokenLogProbs(h, full)[kEndOfSequence] == doctest::Approx(std::log(0.9)));
  std::vector<Label> off{3};
  auto o = t.NextTokenLogProbs(h, off);
  CHECK(o[1] == doctest::Approx(-std::log(4.0)));
  CHECK(t.ScoreSequence(h, full).size() == 3);
  CHECK(SequenceLogProb(t, h, full) == doctest::Approx(3 * std::log(0.9)));
  ScorerHandle unknown = t.Prepare({"other", nullptr});
  CHECK(SequenceLogProb(t, unknown, full) == doctest::Approx(-3 * std::log(4.0)));
  CHECK_THROWS_AS(TableSequenceScorer({{"u", {5}}}, 4), ConfigError);
  CHECK_THROWS_AS(t.NextTokenLogProbs(nullptr, prefix), PreconditionError);
}

TEST_CASE("n-best size") {
  CHECK(ChooseNbestSize() == 5);
  CHECK(ChooseNbestSize(1) == 1);
  CHECK_THROWS_AS(ChooseNbestSize(0), ConfigError);
}

TEST_CASE("one teacher-forcing call per hypothesis") {
  Rng rng(91);
  auto lm = std::make_shared<BigramTableLm>(rng, 5);
  InstrumentedScorer scorer(std::make_shared<CharLmSequenceScorer>(lm));
  NBestList nbest = RandomNbest(rng, 5, 5);
  RescoreNbest(nbest, scorer, scorer.Prepare({"u", nullptr}), {});
  CHECK(scorer.SequenceCalls() == 5);
  CHECK(scorer.StepCalls() == 0);
  CHECK(scorer.PrepareCalls() == 1);
}

TEST_CASE("alpha=1 beta=0 keeps the first-pass ranking exactly") {
  Rng rng(92);
  auto lm = std::make_shared<BigramTableLm>(rng, 5);
  CharLmSequenceScorer scorer(lm);
  for (int i = 0; i < 50; ++i) {
    NBestList nbest = RandomNbest(rng, RandInt(rng, 1, 6), 5);
    RescoreResult r = RescoreNbest(nbest, scorer, nullptr, {.alpha = 1.0, .beta = 0.0});
    REQUIRE(r.ranked.size() == nbest.size());
    for (size_t k = 0; k < nbest.size(); ++k) {
      CHECK(r.ranked[k].words == nbest[k].words);
      CHECK(r.ranked[k].final_score == nbest[k].Cost());
    }
  }
}

TEST_CASE("positive rescaling keeps the selected hypothesis") {
  Rng rng(93);
  auto lm = std::make_shared<BigramTableLm>(rng, 5);
  CharLmSequenceScorer scorer(lm);
  for (int i = 0; i < 100; ++i) {
    NBestList nbest = RandomNbest(rng, 5, 5);
    RescoreOptions o{.alpha = RandUnit(rng) + 0.01, .beta = RandUnit(rng) + 0.01};
    double c = 0.1 + 10 * RandUnit(rng);
    RescoreOptions scaled{.alpha = c * o.alpha, .beta = c * o.beta};
    auto a = RescoreNbest(nbest, scorer, nullptr, o);
    auto b = RescoreNbest(nbest, scorer, nullptr, scaled);
    CHECK(a.ranked.front().words == b.ranked.front().words);
  }
}

TEST_CASE("rescoring selects the reference when only the scorer counts") {
  Rng rng(94);
  NBestList nbest = RandomNbest(rng, 5, 6);
  LabelSequence ref = nbest[3].units;
  TableSequenceScorer table({{"u", ref}}, 6);
  RescoreResult r = RescoreNbest(nbest, table, table.Prepare({"u", nullptr}), {.alpha = 0.0, .beta = 1.0});
  CHECK(r.ranked.front().units == ref);
}

TEST_CASE("fused score formula and graph-only fusion") {
  Rng rng(95);
  auto lm = std::make_shared<BigramTableLm>(rng, 5);
  CharLmSequenceScorer scorer(lm);
  NBestList nbest = RandomNbest(rng, 4, 5);
  for (bool graph_only : {false, true}) {
    RescoreResult r = RescoreNbest(nbest, scorer, nullptr, {.alpha = 0.5, .beta = 2.0, .graph_only = graph_only});
    for (const auto &f : r.ranked) {
      const Hypothesis &h = nbest[f.first_pass_rank];
      CHECK(f.first_pass_score == (graph_only ? h.graph_cost : h.Cost()));
      CHECK(f.rescore == doctest::Approx(-SequenceLogProb(scorer, nullptr, h.units)));
      CHECK(f.final_score == doctest::Approx(0.5 * f.first_pass_score + 2.0 * f.rescore));
    }
    for (size_t k = 1; k < r.ranked.size(); ++k) CHECK(r.ranked[k - 1].final_score <= r.ranked[k].final_score);
  }
  CHECK_THROWS_AS(RescoreNbest(nbest, scorer, nullptr, {.alpha = -1.0}), ConfigError);
}

TEST_CASE("single hypothesis passes through") {
  Rng rng(96);
  auto lm = std::make_shared<BigramTableLm>(rng, 5);
  CharLmSequenceScorer scorer(lm);
  NBestList one = RandomNbest(rng, 1, 5);
  RescoreResult r = RescoreNbest(one, scorer, nullptr, {});
  REQUIRE(r.ranked.size() == 1);
  CHECK(r.ranked[0].units == one[0].units);
  CHECK(r.ranked[0].first_pass_score == one[0].Cost());
}

TEST_CASE("failing hypotheses are dropped without reordering the rest") {
  Rng rng(97);
  auto lm = std::make_shared<BigramTableLm>(rng, 5);
  auto base = std::make_shared<CharLmSequenceScorer>(lm);
  for (int i = 0; i < 30; ++i) {
    NBestList nbest = RandomNbest(rng, 6, 5);
    PickyScorer picky(base, 4);
    RescoreResult all = RescoreNbest(nbest, *base, nullptr, {});
    RescoreResult some;
    try {
      some = RescoreNbest(nbest, picky, nullptr, {});
    } catch (const EmptyResultError &) {
      for (const auto &h : nbest) CHECK(std::count(h.units.begin(), h.units.end(), 4) > 0);
      continue;
    }
    size_t kept = 0;
    for (const auto &f : all.ranked) {
      if (std::count(f.units.begin(), f.units.end(), 4)) continue;
      REQUIRE(kept < some.ranked.size());
      CHECK(some.ranked[kept].words == f.words);
      ++kept;
    }
    CHECK(kept == some.ranked.size());
    CHECK(some.dropped.size() == nbest.size() - kept);
  }
  NBestList empty;
  CHECK_THROWS_AS(RescoreNbest(empty, *base, nullptr, {}), EmptyResultError);
}

TEST_CASE("parallel rescoring equals serial rescoring") {
  Rng rng(98);
  auto lm = std::make_shared<BigramTableLm>(rng, 6);
  CharLmSequenceScorer scorer(lm);
  for (int i = 0; i < 20; ++i) {
    NBestList nbest = RandomNbest(rng, 5, 6);
    RescoreResult a = RescoreNbest(nbest, scorer, nullptr, {});
    RescoreResult b = RescoreNbestParallel(nbest, scorer, nullptr, {}, 3);
    REQUIRE(a.ranked.size() == b.ranked.size());
    for (size_t k = 0; k < a.ranked.size(); ++k) {
      CHECK(a.ranked[k].words == b.ranked[k].words);
      CHECK(a.ranked[k].final_score == b.ranked[k].final_score);
    }
  }
}

TEST_CASE("joint search with ctc weight 1 finds the best CTC labelling") {
  Rng rng(99);
  for (int i = 0; i < 30; ++i) {
    int frames = RandInt(rng, 1, 5), tokens = RandInt(rng, 2, 4);
    PosteriorMatrix post = RandomPosteriors(rng, frames, tokens);
    CharLmSequenceScorer scorer(std::make_shared<UniformCharLm>(tokens));
    LabelSequence best;
    double best_lp = kLogZero;
    for (const auto &[labels, lp] : BruteCtcDistribution(post)) {
      if (lp > best_lp) {
        best_lp = lp;
        best = labels;
      }
    }
    JointSearchResult r = JointBeamSearch(post, scorer, nullptr, {.beam = 1000, .ctc_weight = 1.0, .lm_weight = 0.0});
    CHECK(r.labels == best);
    CHECK(r.score == doctest::Approx(best_lp));
  }
}

TEST_CASE("joint search with an exhaustive beam finds the fused optimum") {
  Rng rng(100);
  for (int i = 0; i < 30; ++i) {
    const int frames = 3, tokens = 3;  // two labels
    PosteriorMatrix post = RandomPosteriors(rng, frames, tokens);
    auto lm = std::make_shared<BigramTableLm>(rng, tokens);
    CharLmSequenceScorer scorer(lm);
    const double w = 0.5;
    LabelSequence best;
    double best_score = kLogZero;
    for (int len = 0; len <= frames; ++len) {
      ForEachSequence(tokens - 1, len, [&](const std::vector<int> &seq) {
        LabelSequence y;
        for (int s : seq) y.push_back(s + 1);
        if (MinimumCtcFrames(y) > frames) return;
        double s = BruteFusedScore(post, *lm, y, w);
        if (s > best_score) {
          best_score = s;
          best = y;
        }
      });
    }
    JointSearchResult r = JointBeamSearch(post, scorer, nullptr, {.beam = 1000, .ctc_weight = w, .lm_weight = 0.0});
    CHECK(r.labels == best);
    CHECK(r.score == doctest::Approx(best_score));
  }
}

TEST_CASE("joint search costs one scorer call per live prefix per step") {
  FixtureOptions fo;
  fo.seed = 21;
  fo.utterances = 3;
  fo.noise = 6.0;
  SyntheticTask task = GenerateFixture(fo);
  std::map<std::string, LabelSequence> refs;
  for (const auto &u : task.utterances) refs[u.id] = u.units;
  InstrumentedScorer scorer(std::make_shared<TableSequenceScorer>(refs, task.inventory.Size()));
  for (const auto &u : task.utterances) {
    scorer.ResetCounts();
    JointSearchResult r = JointBeamSearch(u.posteriors, scorer, scorer.Prepare({u.id, &u.posteriors}), {});
    CHECK(r.scorer_calls == scorer.StepCalls());
    CHECK(r.scorer_calls >= r.labels.size());
    CHECK(r.scorer_calls > static_cast<size_t>(kDefaultNbestSize));
    CHECK(r.labels == u.units);
  }
  CHECK_THROWS_AS(JointBeamSearch(task.utterances[0].posteriors, scorer, nullptr, {.beam = 0}), ConfigError);
  CHECK_THROWS_AS(JointBeamSearch(task.utterances[0].posteriors, scorer, nullptr, {.ctc_weight = 1.5}), ConfigError);
}

TEST_CASE("words map to units character by character") {
  TokenInventory inv(std::vector<std::string>{"a", "b", "\xe4\xbd\xa0"});
  CHECK(WordsToUnits({"ab", "\xe4\xbd\xa0" "a"}, inv) == LabelSequence{1, 2, 3, 1});
  CHECK_THROWS_AS(WordsToUnits({"c"}, inv), ConfigError);
}
