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

#ifndef TWOPASS_EVAL_FIXTURE_H_
#define TWOPASS_EVAL_FIXTURE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "twopass/ctc/posterior.h"
#include "twopass/graph/arpa.h"
#include "twopass/graph/lexicon.h"

namespace twopass {

struct FixtureOptions {
  uint64_t seed = 1;
  int vocab_size = 20;
  int utterances = 50;
  // Standard deviation of Gaussian noise added to every logit. 0 gives
  // posteriors whose greedy path is exactly the sampled alignment.
  double noise = 0.0;
  double peak = 25.0;  // logit of the aligned token

  int num_units = 10;  // units are the letters a, b, c, ...
  int min_word_len = 2;
  int max_word_len = 4;
  int min_words = 2;
  int max_words = 6;
  // When positive, every utterance gets exactly this many posterior frames;
  // words are drawn until the alignment is nearly full.
  int frames = 0;
  int max_unit_frames = 3;
  int max_gap_frames = 2;  // blanks between units; repeats always get one

  int successors_per_word = 3;
  double end_prob = 0.25;      // chance to end after each word
  double random_jump = 0.1;    // chance to pick any word instead of a successor
  int corpus_sentences = 2000;  // LM training text
  double discount = 0.5;
};

struct SyntheticUtterance {
  std::string id;
  std::vector<std::string> words;
  LabelSequence units;
  std::vector<int> alignment;  // token id per frame
  PosteriorMatrix posteriors;

  std::string Text() const;  // words joined by spaces
};

struct SyntheticTask {
  FixtureOptions options;
  TokenInventory inventory;
  Lexicon lexicon;
  ArpaModel arpa;
  std::vector<SyntheticUtterance> utterances;
};

// Deterministic under options.seed. Throws ConfigError for vocab_size < 2 or
// when the unit alphabet cannot hold a prefix-free vocabulary of that size.
SyntheticTask GenerateFixture(const FixtureOptions &options);

// Writes units.txt, lexicon.txt, lm.arpa, refs.txt and posteriors/<utt>.post.
void WriteFixture(const SyntheticTask &task, const std::string &dir);

// Bigram ARPA with absolute discounting and backoff to add-one unigrams.
ArpaModel EstimateBigramArpa(const std::vector<std::vector<std::string>> &corpus,
                             const std::vector<std::string> &vocabulary, double discount = 0.5);

}  // namespace twopass

#endif  // TWOPASS_EVAL_FIXTURE_H_
