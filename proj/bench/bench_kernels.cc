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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <chrono>
#include <map>
#include <memory>

#include "twopass/eval/fixture.h"
#include "twopass/graph/builders.h"
#include "twopass/parallel/batch.h"
#include "twopass/rescore/rescorer.h"

namespace twopass {
namespace {

struct Setup {
  SyntheticTask task;
  std::shared_ptr<const Wfst> graph;
  std::vector<PosteriorMatrix> posts;
  std::shared_ptr<const TableSequenceScorer> table;

  Setup() {
    FixtureOptions o;
    o.seed = 7;
    o.vocab_size = 60;
    o.num_units = 16;
    o.utterances = 32;
    o.noise = 4.0;
    task = GenerateFixture(o);
    graph = std::make_shared<const Wfst>(
        BuildSearchGraph(task.arpa, task.lexicon, task.inventory).fst);
    std::map<std::string, LabelSequence> refs;
    for (const auto &u : task.utterances) {
      posts.push_back(u.posteriors);
      refs[u.id] = u.units;
    }
    table = std::make_shared<TableSequenceScorer>(refs, task.inventory.Size());
  }
};

const Setup &Shared() {
  static Setup setup;
  return setup;
}

void BM_DecodeBatchSerial(benchmark::State &state) {
  const Setup &s = Shared();
  BatchDecodeOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(DecodeBatchSerial(s.graph, s.posts, opts));
}
BENCHMARK(BM_DecodeBatchSerial)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_DecodeBatchParallel(benchmark::State &state) {
  const Setup &s = Shared();
  BatchDecodeOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(DecodeBatchParallel(s.graph, s.posts, opts, state.range(0)));
  }
}
BENCHMARK(BM_DecodeBatchParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

// Rescoring with a scorer that sleeps per call, as a network would block.
void RescoreBench(benchmark::State &state, bool parallel) {
  const Setup &s = Shared();
  InstrumentedScorer scorer(s.table, std::chrono::microseconds(200));
  NBestList nbest = DecodePosteriors(s.graph, s.posts[0], BeamConfig{}, 5);
  ScorerHandle handle = scorer.Prepare({s.task.utterances[0].id, nullptr});
  for (auto _ : state) {
    if (parallel) {
      benchmark::DoNotOptimize(
          RescoreNbestParallel(nbest, scorer, handle, RescoreOptions{}, state.range(0)));
    } else {
      benchmark::DoNotOptimize(RescoreNbest(nbest, scorer, handle, RescoreOptions{}));
    }
  }
}
void BM_RescoreSerial(benchmark::State &state) { RescoreBench(state, false); }
void BM_RescoreParallel(benchmark::State &state) { RescoreBench(state, true); }
BENCHMARK(BM_RescoreSerial)->UseRealTime()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RescoreParallel)->Arg(2)->Arg(5)->UseRealTime()->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace twopass

BENCHMARK_MAIN();
