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
#include <mutex>

#include "test_util.h"
#include "twopass/decoder/chunk_config.h"
#include "twopass/decoder/stream_decoder.h"
#include "twopass/error.h"
#include "twopass/fst/compose.h"
#include "twopass/fst/connect.h"
#include "twopass/fst/enumerate.h"
#include "twopass/fst/shortest_path.h"
#include "twopass/graph/builders.h"

using namespace twopass;
using namespace twopass::testing;

namespace {

BeamConfig Unpruned(int nbest = 5) {
  BeamConfig b;
  b.beam = kInfinity;
  b.max_active = 1 << 30;
  b.nbest = nbest;
  return b;
}

// One frame, three words: frame label k+1 emits word k.
std::shared_ptr<const Wfst> ThreeWordGraph() {
  auto g = std::make_shared<Wfst>();
  g->AddState();
  g->AddState();
  g->SetStart(0);
  g->SetFinal(1, 0.0);
  for (Label k = 2; k <= 4; ++k) g->AddArc(0, Arc{k, k - 1, TropicalWeight(0.0), 1});
  return g;
}

void CheckSameNbest(const NBestList &a, const NBestList &b) {
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].words == b[i].words);
    CHECK(a[i].units == b[i].units);
    CHECK(a[i].graph_cost == b[i].graph_cost);
    CHECK(a[i].acoustic_cost == b[i].acoustic_cost);
  }
}

class RecordingScorer : public AcousticScorer {
 public:
  explicit RecordingScorer(PosteriorMatrix table) : table_(std::move(table)) {}
  PosteriorMatrix Score(const FeatureWindow &w) const override {
    std::lock_guard<std::mutex> lock(mu_);
    windows.push_back(w);
    data.emplace_back(w.data.begin(), w.data.end());
    return table_.Score(w);
  }
  mutable std::vector<FeatureWindow> windows;
  mutable std::vector<std::vector<float>> data;

 private:
  PosteriorTableScorer table_{PosteriorMatrix()};
  mutable std::mutex mu_;
};

}  // namespace

TEST_CASE("chunk config validation and parsing") {
  ChunkConfig c;
  CHECK_NOTHROW(c.Validate());
  c.n_center = 2;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = ChunkConfig{};
  c.n_right = 6;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = ChunkConfig{};
  c.n_left = -4;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  ChunkConfig p = ParseChunkConfig("160,32,16");
  CHECK(p.n_left == 160);
  CHECK(p.n_center == 32);
  CHECK(p.n_right == 16);
  CHECK_THROWS_AS(ParseChunkConfig("160,32"), ConfigError);
  CHECK_THROWS_AS(ParseChunkConfig("160,x,16"), ConfigError);
}

TEST_CASE("latency ignores left context") {
  CHECK(LatencyMs({.n_left = 160, .n_center = 64, .n_right = 32}) == 960.0);
  CHECK(LatencyMs({.n_left = 160, .n_center = 32, .n_right = 16}) == 480.0);
  CHECK(LatencyMs({.n_left = 160, .n_center = 48, .n_right = 24}) == 720.0);
  CHECK(LatencyMs({.n_left = 0, .n_center = 48, .n_right = 24}) == 720.0);
}

TEST_CASE("session start") {
  auto g = ThreeWordGraph();
  StreamDecoder s(g, {}, {}, nullptr);
  auto tokens = s.ActiveTokens();
  REQUIRE(tokens.size() == 1);
  CHECK(tokens[0].first == 0);
  CHECK(tokens[0].second == 0.0);

  auto e = std::make_shared<Wfst>(*g);
  StateId extra = e->AddState();
  e->AddArc(0, Arc{0, 0, TropicalWeight(0.5), extra});
  ArcSortInPlace(e.get(), ArcSortType::kInput);
  StreamDecoder s2(e, {}, {}, nullptr);
  auto closure = s2.ActiveTokens();
  REQUIRE(closure.size() == 2);
  CHECK(closure[1].first == extra);
  CHECK(closure[1].second == 0.5);

  BeamConfig bad;
  bad.beam = 0;
  CHECK_THROWS_AS(StreamDecoder(g, {}, bad, nullptr), ConfigError);
  bad = BeamConfig{};
  bad.acoustic_scale = -1;
  CHECK_THROWS_AS(StreamDecoder(g, {}, bad, nullptr), ConfigError);
}

TEST_CASE("fewer than n requested hypotheses when the graph has fewer") {
  auto g = ThreeWordGraph();
  Rng rng(81);
  PosteriorMatrix post = RandomPosteriors(rng, 1, 4);
  NBestList n = DecodePosteriors(g, post, {}, 5);
  CHECK(n.size() == 3);
  for (size_t i = 1; i < n.size(); ++i) CHECK(n[i - 1].Cost() <= n[i].Cost());
}

TEST_CASE("finalize errors") {
  auto g = ThreeWordGraph();
  Rng rng(82);
  StreamDecoder s(g, {}, {}, nullptr);
  CHECK_THROWS_AS(s.Finalize(0), ConfigError);
  s.AdvancePosteriors(RandomPosteriors(rng, 2, 4));  // past the only final state
  try {
    s.Finalize(1);
    FAIL("expected EmptyResultError");
  } catch (const EmptyResultError &e) {
    CHECK(e.partial_words().empty());
  }
  CHECK_THROWS_AS(s.PushFrames(PlaceholderFeatures(1, 4)), StateError);
  CHECK_THROWS_AS(s.Finalize(1), StateError);
}

TEST_CASE("empty result carries the best partial words") {
  // Final state needs three frames; two words emitted on the way.
  auto g = std::make_shared<Wfst>();
  for (int i = 0; i < 4; ++i) g->AddState();
  g->SetStart(0);
  g->SetFinal(3, 0.0);
  g->AddArc(0, Arc{2, 1, TropicalWeight(0.0), 1});
  g->AddArc(1, Arc{2, 2, TropicalWeight(0.0), 2});
  g->AddArc(2, Arc{2, 1, TropicalWeight(0.0), 3});
  Rng rng(83);
  try {
    DecodePosteriors(g, RandomPosteriors(rng, 2, 2), {}, 1);
    FAIL("expected EmptyResultError");
  } catch (const EmptyResultError &e) {
    CHECK(e.partial_words() == std::vector<int>{1, 2});
  }
}

TEST_CASE("push_frames consumes whole windows only") {
  FixtureOptions fo;
  fo.seed = 3;
  fo.utterances = 1;
  fo.frames = 40;
  SyntheticTask task = GenerateFixture(fo);
  auto g = FixtureGraph(task);
  const PosteriorMatrix &post = task.utterances[0].posteriors;
  ChunkConfig c{.n_left = 16, .n_center = 16, .n_right = 8};
  StreamDecoder s(g, c, {}, std::make_shared<PosteriorTableScorer>(post));
  FeatureMatrix feats = PlaceholderFeatures(post.NumFrames(), c.subsample);
  auto initial = s.ActiveTokens();
  REQUIRE_FALSE(initial.empty());
  auto by_cost = [](auto &a, auto &b) { return a.second < b.second; };
  CHECK(std::min_element(initial.begin(), initial.end(), by_cost)->second == 0.0);
  CHECK(s.PushFrames(feats.RowRange(0, 23)) == 0);
  CHECK(s.ActiveTokens() == initial);
  CHECK(s.PushFrames(feats.RowRange(23, 24)) == 4);  // one full window
  CHECK(s.NumFramesDecoded() == 4);
  CHECK(s.Watermark() == 16);
  int last = s.NumFramesDecoded();
  for (int b = 24; b < feats.NumRows(); b += 7) {
    s.PushFrames(feats.RowRange(b, b + 7));
    CHECK(s.NumFramesDecoded() >= last);
    last = s.NumFramesDecoded();
  }
  NBestList n = s.Finalize(1);
  CHECK(s.NumFramesDecoded() == post.NumFrames());
  REQUIRE(n.size() == 1);
  CHECK(n[0].units == task.utterances[0].units);
}

TEST_CASE("windows carry left context and zero-padded right context") {
  FixtureOptions fo;
  fo.seed = 4;
  fo.utterances = 1;
  fo.frames = 30;
  SyntheticTask task = GenerateFixture(fo);
  auto g = FixtureGraph(task);
  const PosteriorMatrix &post = task.utterances[0].posteriors;
  ChunkConfig c{.n_left = 8, .n_center = 16, .n_right = 8};
  auto rec = std::make_shared<RecordingScorer>(post);
  StreamDecoder s(g, c, {}, rec);
  // Feature value = input frame index + 1, so padding shows up as 0.
  std::vector<float> values(post.NumFrames() * 4);
  for (size_t i = 0; i < values.size(); ++i) values[i] = static_cast<float>(i + 1);
  s.PushFrames(FeatureMatrix(post.NumFrames() * 4, 1, values));
  s.Finalize(1);
  // 120 input frames: centers at 0, 16, ..., 112 (last one 8 frames).
  REQUIRE(rec->windows.size() == 8);
  CHECK(rec->windows[0].left_frames == 0);
  CHECK(rec->windows[1].left_frames == 8);
  CHECK(rec->data[1].front() == 9.0f);  // frame 8
  const FeatureWindow &last = rec->windows.back();
  CHECK(last.center_start == 112);
  CHECK(last.center_frames == 8);
  CHECK(last.right_frames == 8);
  const auto &d = rec->data.back();
  REQUIRE(d.size() == 24);
  CHECK(d[8 + 7] == 120.0f);
  for (size_t i = 16; i < 24; ++i) CHECK(d[i] == 0.0f);
}

TEST_CASE("chunked and single-shot decoding agree") {
  FixtureOptions fo;
  fo.seed = 5;
  fo.utterances = 6;
  fo.noise = 8.0;
  SyntheticTask task = GenerateFixture(fo);
  auto g = FixtureGraph(task);
  BeamConfig beam;
  beam.beam = 12.0;
  beam.max_active = 50;
  for (const auto &u : task.utterances) {
    NBestList offline = DecodePosteriors(g, u.posteriors, beam, 5);
    for (ChunkConfig c : {ChunkConfig{.n_left = 160, .n_center = 64, .n_right = 32},
                          ChunkConfig{.n_left = 0, .n_center = 4, .n_right = 0},
                          ChunkConfig{.n_left = 8, .n_center = 12, .n_right = 4}}) {
      for (int push : {0, 1, 13}) CheckSameNbest(DecodeChunked(g, u.posteriors, c, beam, 5, push), offline);
    }
  }
}

TEST_CASE("unpruned 1-best equals the shortest path through the composed graph") {
  FixtureOptions fo;
  fo.seed = 6;
  fo.utterances = 5;
  fo.noise = 10.0;
  fo.vocab_size = 8;
  fo.num_units = 5;
  SyntheticTask task = GenerateFixture(fo);
  auto g = FixtureGraph(task);
  for (const auto &u : task.utterances) {
    NBestList n = DecodePosteriors(g, u.posteriors, Unpruned(), 1);
    Wfst composed = Compose(LinearPosteriorFst(u.posteriors), *g);
    std::vector<Path> best = ShortestPaths(composed, 1);
    REQUIRE(best.size() == 1);
    CHECK(n[0].Cost() == doctest::Approx(best[0].weight).epsilon(1e-9));
  }
}

TEST_CASE("unpruned n-best equals distinct word sequences of the composed graph") {
  Rng rng(84);
  for (int i = 0; i < 8; ++i) {
    ToySystem sys = RandomToySystem(rng, {.max_units = 2, .max_words = 3, .max_pron_len = 2});
    auto g = std::make_shared<const Wfst>(BuildSearchGraph(sys.arpa, sys.lexicon, sys.inventory).fst);
    int frames = RandInt(rng, 2, 5);
    PosteriorMatrix post = RandomPosteriors(rng, frames, sys.inventory.Size());
    WeightedLanguage lang = PathEnumerate(Compose(LinearPosteriorFst(post), *g), frames);
    std::map<std::vector<Label>, double> by_words;
    for (const auto &[k, w] : lang) {
      auto [it, inserted] = by_words.try_emplace(k.output, w);
      if (!inserted) it->second = std::min(it->second, w);
    }
    std::vector<double> expect;
    for (const auto &[words, w] : by_words) expect.push_back(w);
    std::sort(expect.begin(), expect.end());
    NBestList n;
    try {
      n = DecodePosteriors(g, post, Unpruned(), 4);
    } catch (const EmptyResultError &) {
      CHECK(expect.empty());
      continue;
    }
    REQUIRE(n.size() == std::min<size_t>(4, expect.size()));
    for (size_t k = 0; k < n.size(); ++k) {
      CHECK(n[k].Cost() == doctest::Approx(expect[k]).epsilon(1e-9));
      CHECK(by_words.at(n[k].words) == doctest::Approx(n[k].Cost()).epsilon(1e-9));
    }
  }
}

TEST_CASE("widening the beam never raises the 1-best cost") {
  FixtureOptions fo;
  fo.seed = 9;
  fo.utterances = 10;
  fo.noise = 10.0;
  SyntheticTask task = GenerateFixture(fo);
  auto g = FixtureGraph(task);
  for (const auto &u : task.utterances) {
    double prev = kInfinity;
    for (double width : {8.0, 16.0, 32.0, kInfinity}) {
      BeamConfig b = Unpruned();
      b.beam = width;
      double cost = kInfinity;
      try {
        cost = DecodePosteriors(g, u.posteriors, b, 1)[0].Cost();
      } catch (const EmptyResultError &) {
      }
      CHECK(cost <= prev + 1e-9);
      prev = cost;
    }
  }
}

TEST_CASE("noise-free posteriors decode to the reference") {
  FixtureOptions fo;
  fo.seed = 10;
  fo.utterances = 10;
  SyntheticTask task = GenerateFixture(fo);
  auto g = FixtureGraph(task);
  auto words = BuildSearchGraph(task.arpa, task.lexicon, task.inventory).words;
  for (const auto &u : task.utterances) {
    NBestList n = DecodePosteriors(g, u.posteriors, {}, 1);
    std::vector<std::string> got;
    for (Label w : n[0].words) got.push_back(words->Find(w));
    CHECK(got == u.words);
    CHECK(n[0].units == u.units);
  }
}

TEST_CASE("sessions on a shared graph are independent") {
  FixtureOptions fo;
  fo.seed = 11;
  fo.utterances = 2;
  SyntheticTask task = GenerateFixture(fo);
  auto g = FixtureGraph(task);
  StreamDecoder a(g, {}, {}, nullptr), b(g, {}, {}, nullptr);
  a.AdvancePosteriors(task.utterances[0].posteriors);
  b.AdvancePosteriors(task.utterances[1].posteriors);
  NBestList na = a.Finalize(1), nb = b.Finalize(1);
  CheckSameNbest(na, DecodePosteriors(g, task.utterances[0].posteriors, {}, 1));
  CheckSameNbest(nb, DecodePosteriors(g, task.utterances[1].posteriors, {}, 1));
}

TEST_CASE("max_active bounds the tokens that survive pruning") {
  FixtureOptions fo;
  fo.seed = 12;
  fo.utterances = 1;
  fo.noise = 10.0;
  SyntheticTask task = GenerateFixture(fo);
  auto g = FixtureGraph(task);
  BeamConfig b = Unpruned();
  b.max_active = 3;
  StreamDecoder s(g, {}, b, nullptr);
  StreamDecoder wide(g, {}, Unpruned(), nullptr);
  const PosteriorMatrix &post = task.utterances[0].posteriors;
  size_t widest = 0;
  for (int t = 0; t < post.NumFrames(); ++t) {
    s.AdvancePosteriors(post.Rows(t, t + 1));
    wide.AdvancePosteriors(post.Rows(t, t + 1));
    CHECK(s.LastSurvivors() <= 3);
    widest = std::max(widest, wide.LastSurvivors());
  }
  CHECK(widest > 3);
}

TEST_CASE("posterior width must cover the graph's labels") {
  auto g = ThreeWordGraph();
  Rng rng(85);
  CHECK_THROWS_AS(DecodePosteriors(g, RandomPosteriors(rng, 1, 2), {}, 1), PreconditionError);
}
