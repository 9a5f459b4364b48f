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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.h"
#include "twopass/ctc/ctc_loss.h"
#include "twopass/ctc/prefix_beam_search.h"
#include "twopass/decoder/stream_decoder.h"
#include "twopass/error.h"
#include "twopass/eval/cer.h"
#include "twopass/eval/nbest_io.h"
#include "twopass/eval/pipeline.h"
#include "twopass/fst/compose.h"
#include "twopass/fst/connect.h"
#include "twopass/fst/determinize.h"
#include "twopass/fst/enumerate.h"
#include "twopass/fst/minimize.h"
#include "twopass/fst/shortest_path.h"
#include "twopass/graph/builders.h"
#include "twopass/parallel/batch.h"
#include "twopass/rescore/joint_baseline.h"
#include "twopass/rescore/rescorer.h"
#include "twopass/text.h"

using namespace twopass;
using namespace twopass::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  void Fail(const std::string &why) {
    if (pass) detail = why;
    pass = false;
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char *f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

WeightedLanguage ComposeLanguages(const WeightedLanguage &a, const WeightedLanguage &b) {
  WeightedLanguage out;
  for (const auto &[ka, wa] : a) {
    for (const auto &[kb, wb] : b) {
      if (ka.output != kb.input) continue;
      auto [it, inserted] = out.try_emplace(PathKey{ka.input, kb.output}, wa + wb);
      if (!inserted) it->second = std::min(it->second, wa + wb);
    }
  }
  return out;
}

WeightedLanguage Restrict(const WeightedLanguage &lang, size_t max_len) {
  WeightedLanguage out;
  for (const auto &[k, w] : lang) {
    if (k.input.size() <= max_len && k.output.size() <= max_len) out.emplace(k, w);
  }
  return out;
}

BeamConfig Unpruned(int nbest) {
  BeamConfig b;
  b.beam = kInfinity;
  b.max_active = 1 << 30;
  b.nbest = nbest;
  return b;
}

bool SameNbest(const NBestList &a, const NBestList &b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].words != b[i].words || a[i].units != b[i].units || a[i].graph_cost != b[i].graph_cost ||
        a[i].acoustic_cost != b[i].acoustic_cost) {
      return false;
    }
  }
  return true;
}

std::string WordText(const std::vector<Label> &words, const SymbolTable &table) {
  return Join(WordStrings(words, table), " ");
}

std::string UnitText(const LabelSequence &units, const TokenInventory &inv) {
  std::string out;
  for (Label u : units) out += inv.Symbol(u);
  return out;
}

// (n_center, n_right) of the nine streaming configurations; n_left is 160.
const std::vector<std::pair<int, int>> kChunkConfigs = {{64, 32}, {64, 24}, {64, 16}, {48, 32}, {48, 24},
                                                        {48, 16}, {32, 32}, {32, 24}, {32, 16}};

Outcome FstCorrectness() {
  Outcome o;
  auto start = Clock::now();
  Rng rng(1001);
  RandomWfstOptions acyclic;
  acyclic.acyclic = true;
  RandomWfstOptions eps;
  eps.epsilon_prob = 0.4;
  const int cases = 500;
  int machines = 0;
  for (int i = 0; i < cases; ++i) {
    std::string diff;
    Wfst a = RandomWfst(rng), b = RandomWfst(rng);
    WeightedLanguage expect = Restrict(ComposeLanguages(PathEnumerate(a, 8), PathEnumerate(b, 8)), 3);
    if (!LanguagesEqual(Restrict(PathEnumerate(Compose(a, b), 8), 3), expect, 1e-9, &diff)) {
      o.Fail(Fmt("compose case %d: %s", i, diff.c_str()));
    }
    Wfst c = RandomWfst(rng, acyclic);
    Wfst d = Determinize(c);
    if (!d.IsPairDeterministic() || !LanguagesEqual(PathEnumerate(d, 8), PathEnumerate(c, 8), 1e-9, &diff)) {
      o.Fail(Fmt("determinize case %d: %s", i, diff.c_str()));
    }
    Wfst m = Minimize(d);
    if (m.NumStates() > d.NumStates() || !LanguagesEqual(PathEnumerate(m, 8), PathEnumerate(c, 8), 1e-9, &diff)) {
      o.Fail(Fmt("minimize case %d: %s", i, diff.c_str()));
    }
    Wfst e = RandomWfst(rng, eps);
    Wfst r = RmEpsilon(e);
    if (r.HasEpsilonArcs() || !LanguagesEqual(PathEnumerate(r, 8), PathEnumerate(e, 8), 1e-9, &diff)) {
      o.Fail(Fmt("rm_epsilon case %d: %s", i, diff.c_str()));
    }
    machines += 4;
  }
  double secs = Seconds(start);
  if (secs >= 60.0) o.Fail(Fmt("took %.1f s", secs));
  if (o.pass) o.detail = Fmt("%d cases, %d random machines, %.1f s", cases, machines, secs);
  return o;
}

Outcome SearchGraphEquivalence() {
  Outcome o;
  Rng rng(1002);
  const int systems = 20;
  size_t keys = 0;
  for (int i = 0; i < systems; ++i) {
    ToySystem sys = RandomToySystem(rng);
    SearchGraph s = BuildSearchGraph(sys.arpa, sys.lexicon, sys.inventory);
    SearchGraph naive = BuildUnoptimizedSearchGraph(sys.arpa, sys.lexicon, sys.inventory);
    WeightedLanguage ls = PathEnumerate(s.fst, 5), ln = PathEnumerate(naive.fst, 5);
    std::string diff;
    if (!LanguagesEqual(ls, ln, 1e-9, &diff)) o.Fail(Fmt("system %d: %s", i, diff.c_str()));
    if (ln.empty()) o.Fail(Fmt("system %d has an empty language", i));
    keys += ln.size();
  }
  if (o.pass) o.detail = Fmt("%d toy systems, %zu weighted strings compared", systems, keys);
  return o;
}

Outcome CtcOracle() {
  Outcome o;
  Rng rng(1003);
  int loss_cases = 0, checked = 0;
  while (loss_cases < 200) {
    int frames = RandInt(rng, 1, 6), tokens = RandInt(rng, 2, 4);
    PosteriorMatrix post = RandomPosteriors(rng, frames, tokens);
    for (const auto &[labels, lp] : BruteCtcDistribution(post)) {
      double loss = CtcLoss(post, labels);
      if (std::abs(loss + lp) > 1e-6) o.Fail(Fmt("loss case %d: %.12g vs %.12g", loss_cases, loss, -lp));
      ++checked;
    }
    ++loss_cases;
  }
  int grad_cases = 0;
  double worst = 0.0;
  const double h = 1e-5;
  while (grad_cases < 100) {
    int frames = RandInt(rng, 2, 6), tokens = RandInt(rng, 2, 4);
    PosteriorMatrix post = RandomPosteriors(rng, frames, tokens);
    LabelSequence ref;
    for (int k = RandInt(rng, 1, (frames + 1) / 2); k > 0; --k) ref.push_back(RandInt(rng, 1, tokens - 1));
    if (MinimumCtcFrames(ref) > frames) continue;
    CtcLossGradient g = CtcLossAndGradient(post, ref);
    for (int t = 0; t < frames; ++t) {
      for (int k = 0; k < tokens; ++k) {
        PosteriorMatrix plus = post, minus = post;
        plus.At(t, k) += h;
        minus.At(t, k) -= h;
        double fd = (CtcLoss(plus, ref) - CtcLoss(minus, ref)) / (2 * h);
        double an = g.grad[static_cast<size_t>(t) * tokens + k];
        double rel = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-8});
        worst = std::max(worst, rel);
      }
    }
    ++grad_cases;
  }
  if (worst > 1e-4) o.Fail(Fmt("gradient relative error %.3g", worst));
  if (o.pass) {
    o.detail = Fmt("%d loss instances (%d labellings), %d gradient instances, worst rel err %.2g", loss_cases,
                   checked, grad_cases, worst);
  }
  return o;
}

Outcome PrefixBeamExactness() {
  Outcome o;
  Rng rng(1004);
  const int cases = 200;
  for (int i = 0; i < cases; ++i) {
    int frames = RandInt(rng, 1, 5), tokens = RandInt(rng, 2, 4);
    PosteriorMatrix post = RandomPosteriors(rng, frames, tokens);
    LabelSequence best;
    double best_lp = kLogZero;
    for (const auto &[labels, lp] : BruteCtcDistribution(post)) {
      if (lp > best_lp) {
        best_lp = lp;
        best = labels;
      }
    }
    auto hyps = PrefixBeamSearch(post, {.beam = 100000, .lm_weight = 0.0});
    if (hyps.empty() || hyps[0].labels != best) o.Fail(Fmt("instance %d: wrong top-1", i));
  }
  if (o.pass) o.detail = Fmt("%d/%d instances exact", cases, cases);
  return o;
}

Outcome StreamingEquivalence() {
  Outcome o;
  FixtureOptions fo;
  fo.seed = 1005;
  fo.utterances = 50;
  fo.noise = 8.0;
  SyntheticTask task = GenerateFixture(fo);
  auto graph = FixtureGraph(task);
  BeamConfig beam;
  int compared = 0;
  for (const auto &u : task.utterances) {
    NBestList offline;
    try {
      offline = DecodePosteriors(graph, u.posteriors, beam, 5);
    } catch (const EmptyResultError &) {
      o.Fail(u.id + ": offline decode found no final state");
      continue;
    }
    for (auto [nc, nr] : kChunkConfigs) {
      ChunkConfig c{.n_left = 160, .n_center = nc, .n_right = nr};
      if (!SameNbest(DecodeChunked(graph, u.posteriors, c, beam, 5), offline)) {
        o.Fail(Fmt("%s differs at (160,%d,%d)", u.id.c_str(), nc, nr));
      }
      ++compared;
    }
  }
  if (o.pass) o.detail = Fmt("9 configs x %zu utterances, %d n-best lists identical", task.utterances.size(), compared);
  return o;
}

Outcome LatencyReproduction() {
  Outcome o;
  const std::vector<double> expect = {960, 880, 800, 800, 720, 640, 640, 560, 480};
  std::string got;
  for (size_t i = 0; i < kChunkConfigs.size(); ++i) {
    auto [nc, nr] = kChunkConfigs[i];
    double ms = LatencyMs(ChunkConfig{.n_left = 160, .n_center = nc, .n_right = nr});
    got += Fmt("%s%g", i ? " " : "", ms);
    if (ms != expect[i]) o.Fail(Fmt("(%d,%d): %g ms", nc, nr, ms));
  }
  if (o.pass) o.detail = got + " ms";
  return o;
}

Outcome DecoderOracle() {
  Outcome o;
  FixtureOptions fo;
  fo.seed = 1007;
  fo.utterances = 50;
  fo.noise = 10.0;
  fo.vocab_size = 8;
  fo.num_units = 5;
  fo.max_words = 4;
  SyntheticTask task = GenerateFixture(fo);
  auto graph = FixtureGraph(task);
  double worst = 0.0;
  for (const auto &u : task.utterances) {
    std::vector<Path> best = ShortestPaths(Compose(LinearPosteriorFst(u.posteriors), *graph), 1);
    NBestList n;
    try {
      n = DecodePosteriors(graph, u.posteriors, Unpruned(1), 1);
    } catch (const EmptyResultError &) {
    }
    if (best.empty() || n.empty()) {
      if (best.size() != n.size()) o.Fail(u.id + ": decoder and oracle disagree on success");
      continue;
    }
    double diff = std::abs(n[0].Cost() - best[0].weight);
    worst = std::max(worst, diff);
    if (diff > 1e-6) o.Fail(Fmt("%s: %.9g vs %.9g", u.id.c_str(), n[0].Cost(), best[0].weight));
  }
  if (o.pass) o.detail = Fmt("%zu utterances, max |diff| %.2g", task.utterances.size(), worst);
  return o;
}

Outcome NoiseFreePipeline() {
  Outcome o;
  FixtureOptions fo;
  fo.seed = 1008;
  fo.utterances = 30;
  std::string dir = MakeTempDir("acceptance_clean");
  WriteFixture(GenerateFixture(fo), dir);
  PipelineConfig c;
  c.units = dir + "/units.txt";
  c.lexicon = dir + "/lexicon.txt";
  c.arpa = dir + "/lm.arpa";
  c.posteriors = dir + "/posteriors";
  c.refs = dir + "/refs.txt";
  c.scorer = "table:" + c.refs;
  std::string summary;
  for (bool chunked : {false, true}) {
    if (chunked) c.chunks = ChunkConfig{.n_left = 160, .n_center = 32, .n_right = 32};
    PipelineResult r = RunPipeline(c);
    if (r.report.Cer() != 0.0) o.Fail(Fmt("%s CER %.4f", chunked ? "chunked" : "offline", r.report.Cer()));
    summary += Fmt("%s%s CER %.2f%% over %d utterances", chunked ? ", " : "", chunked ? "chunked" : "offline",
                   100 * r.report.Cer(), r.report.utterances);
  }
  if (o.pass) o.detail = summary;
  return o;
}

Outcome LmBenefit() {
  Outcome o;
  FixtureOptions fo;
  fo.seed = 1009;
  fo.utterances = 50;
  fo.noise = 10.0;
  SyntheticTask task = GenerateFixture(fo);
  SearchGraph sg = BuildSearchGraph(task.arpa, task.lexicon, task.inventory);
  auto graph = std::make_shared<const Wfst>(std::move(sg.fst));
  UniformCharLm uniform(task.inventory.Size());
  EvalReport wfst, ctc;
  for (const auto &u : task.utterances) {
    std::vector<Label> words;
    try {
      words = DecodePosteriors(graph, u.posteriors, BeamConfig{}, 1)[0].words;
    } catch (const EmptyResultError &e) {
      words = e.partial_words();
    }
    wfst.Add(CharacterErrors(u.Text(), WordText(words, *sg.words)));
    auto hyps = PrefixBeamSearch(u.posteriors, {.beam = 10, .lm_weight = 1.0}, &uniform);
    ctc.Add(CharacterErrors(u.Text(), hyps.empty() ? "" : UnitText(hyps[0].labels, task.inventory)));
  }
  if (!(wfst.Cer() < ctc.Cer())) o.Fail("");
  o.detail = Fmt("CER with trained LM graph %.2f%% vs CTC with uniform LM %.2f%% (%d utterances, noise %.0f)",
                 100 * wfst.Cer(), 100 * ctc.Cer(), wfst.utterances, fo.noise);
  return o;
}

Outcome Speedup() {
  Outcome o;
  FixtureOptions fo;
  fo.seed = 1010;
  fo.utterances = 3;
  fo.frames = 1000;
  fo.noise = 4.0;
  SyntheticTask task = GenerateFixture(fo);
  auto graph = FixtureGraph(task);
  std::map<std::string, LabelSequence> refs;
  for (const auto &u : task.utterances) refs[u.id] = u.units;
  InstrumentedScorer scorer(std::make_shared<TableSequenceScorer>(refs, task.inventory.Size()),
                             std::chrono::microseconds(200));

  double two_pass = 0.0, baseline = 0.0;
  size_t baseline_calls = 0, labels_out = 0;
  for (const auto &u : task.utterances) {
    scorer.ResetCounts();
    auto t0 = Clock::now();
    NBestList nbest = DecodePosteriors(graph, u.posteriors, BeamConfig{}, kDefaultNbestSize);
    UtteranceContext ctx{u.id, &u.posteriors};
    RescoreResult r = RescoreNbest(nbest, scorer, scorer.Prepare(ctx), {});
    two_pass += Seconds(t0);
    if (nbest.size() != static_cast<size_t>(kDefaultNbestSize) || scorer.SequenceCalls() != 5 ||
        scorer.StepCalls() != 0) {
      o.Fail(Fmt("%s: %zu hypotheses, %zu rescoring calls", u.id.c_str(), nbest.size(), scorer.TotalCalls()));
    }
    if (r.ranked.front().units != u.units) o.Fail(u.id + ": two-pass result differs from the reference");

    scorer.ResetCounts();
    t0 = Clock::now();
    JointSearchResult j = JointBeamSearch(u.posteriors, scorer, scorer.Prepare(ctx), {.beam = 10});
    baseline += Seconds(t0);
    if (j.scorer_calls != scorer.StepCalls() || j.scorer_calls < j.labels.size() ||
        j.scorer_calls < static_cast<size_t>(j.steps)) {
      o.Fail(Fmt("%s: baseline made %zu calls for %zu labels", u.id.c_str(), j.scorer_calls, j.labels.size()));
    }
    baseline_calls += j.scorer_calls;
    labels_out += j.labels.size();
  }
  double ratio = baseline / two_pass;
  if (ratio < 2.0) o.Fail("");
  o.detail = Fmt("%zu utterances x 1000 frames: two-pass %.3f s, baseline %.3f s, speedup %.1fx; "
                 "rescoring 5 calls/utt, baseline %zu calls for %zu output labels",
                 task.utterances.size(), two_pass, baseline, ratio, baseline_calls, labels_out);
  return o;
}

Outcome FusionSanity() {
  Outcome o;
  FixtureOptions fo;
  fo.seed = 1011;
  fo.utterances = 30;
  fo.noise = 10.0;
  SyntheticTask task = GenerateFixture(fo);
  auto graph = FixtureGraph(task);
  std::map<std::string, LabelSequence> refs;
  for (const auto &u : task.utterances) refs[u.id] = u.units;
  TableSequenceScorer scorer(refs, task.inventory.Size(), 0.6);
  Rng rng(1011);
  int lists = 0, rescalings = 0;
  for (const auto &u : task.utterances) {
    NBestList nbest;
    try {
      nbest = DecodePosteriors(graph, u.posteriors, BeamConfig{}, 5);
    } catch (const EmptyResultError &) {
      continue;
    }
    ScorerHandle h = scorer.Prepare({u.id, &u.posteriors});
    RescoreResult first = RescoreNbest(nbest, scorer, h, {.alpha = 1.0, .beta = 0.0});
    for (size_t k = 0; k < nbest.size(); ++k) {
      if (first.ranked[k].words != nbest[k].words || first.ranked[k].final_score != nbest[k].Cost()) {
        o.Fail(u.id + ": alpha=1 beta=0 changed the first-pass ranking");
      }
    }
    ++lists;
    for (int trial = 0; trial < 20; ++trial) {
      RescoreOptions base{.alpha = 0.05 + 2 * RandUnit(rng), .beta = 0.05 + 2 * RandUnit(rng)};
      int top = RescoreNbest(nbest, scorer, h, base).ranked.front().first_pass_rank;
      for (double c : {1e-3, 0.5, 3.0, 1e3}) {
        RescoreOptions scaled{.alpha = c * base.alpha, .beta = c * base.beta};
        if (RescoreNbest(nbest, scorer, h, scaled).ranked.front().first_pass_rank != top) {
          o.Fail(Fmt("%s: scaling by %g changed the selection", u.id.c_str(), c));
        }
        ++rescalings;
      }
    }
  }
  if (lists < 25) o.Fail(Fmt("only %d decoded n-best lists", lists));
  if (o.pass) o.detail = Fmt("%d n-best lists, %d rescalings", lists, rescalings);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 fst-correctness", FstCorrectness},
      {"AC2 search-graph-equivalence", SearchGraphEquivalence},
      {"AC3 ctc-oracle", CtcOracle},
      {"AC4 prefix-beam-exactness", PrefixBeamExactness},
      {"AC5 streaming-offline-equivalence", StreamingEquivalence},
      {"AC6 latency", LatencyReproduction},
      {"AC7 decoder-oracle", DecoderOracle},
      {"AC8 noise-free-pipeline", NoiseFreePipeline},
      {"AC9 lm-benefit", LmBenefit},
      {"AC10 rescoring-speedup", Speedup},
      {"AC11 fusion-sanity", FusionSanity},
  };
  int failed = 0;
  for (const auto &[name, run] : criteria) {
    Outcome o;
    auto start = Clock::now();
    try {
      o = run();
    } catch (const std::exception &e) {
      o.Fail(std::string("exception: ") + e.what());
    }
    std::printf("%-36s %s  %s [%.1f s]\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                Seconds(start));
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
