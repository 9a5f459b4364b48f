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

#ifndef TWOPASS_DECODER_STREAM_DECODER_H_
#define TWOPASS_DECODER_STREAM_DECODER_H_

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "twopass/ctc/posterior.h"
#include "twopass/decoder/acoustic_scorer.h"
#include "twopass/decoder/chunk_config.h"
#include "twopass/fst/wfst.h"

namespace twopass {

struct BeamConfig {
  double beam = 30.0;  // cost width in nats; +inf disables beam pruning
  int max_active = 7000;
  double acoustic_scale = 1.0;
  double word_insertion_penalty = 0.0;  // nats per output word, added to the graph cost
  // Distinct word histories kept per graph state; bounds Finalize's n.
  int nbest = 5;

  void Validate() const;
};

struct Hypothesis {
  std::vector<Label> words;  // output labels of the graph
  LabelSequence units;       // collapsed frame labels (token ids)
  double graph_cost = 0.0;   // LM + lexicon + insertion penalty, nats
  double acoustic_cost = 0.0;
  double Cost() const { return graph_cost + acoustic_cost; }
};

// Sorted by ascending total cost, unique by word sequence.
using NBestList = std::vector<Hypothesis>;

// First-pass decoding session: token passing over the search graph, one
// token per graph state, each carrying up to BeamConfig::nbest distinct word
// histories. Keeping the n best distinct histories per state is exact for
// the n best distinct word sequences overall. A session is single-threaded;
// many sessions may share one graph and scorer.
class StreamDecoder {
 public:
  StreamDecoder(std::shared_ptr<const Wfst> graph, ChunkConfig chunks, BeamConfig beam,
                std::shared_ptr<const AcousticScorer> scorer);

  // Buffers input frames and decodes every complete window. Returns the
  // number of posterior frames decoded by this call.
  int PushFrames(const FeatureMatrix &frames);

  // Advances directly over posterior rows, bypassing chunking and scoring.
  void AdvancePosteriors(const PosteriorMatrix &rows);

  // Flushes buffered frames (zero-padding the missing right context), applies
  // final weights and returns up to n hypotheses. Throws EmptyResultError if
  // no token is in a final state.
  NBestList Finalize(int n);

  int NumFramesDecoded() const { return frames_decoded_; }
  int64_t Watermark() const { return watermark_; }
  bool Finalized() const { return finalized_; }
  // Tokens that survived beam and max_active pruning on the last frame.
  size_t LastSurvivors() const { return last_survivors_; }
  // (state, best cost) of active tokens, ordered by state.
  std::vector<std::pair<StateId, double>> ActiveTokens() const;

 private:
  struct Entry {
    double cost;
    double graph;
    double acoustic;
    int words;  // word-history trie node
    int units;  // unit-history trie node
    Label last_frame_label;
  };
  struct Token {
    StateId state;
    std::vector<Entry> entries;  // ascending (cost, words)
  };
  class Trie {
   public:
    Trie() : nodes_{{-1, kEpsilon}} {}
    int Append(int node, Label label);
    std::vector<Label> Get(int node) const;

   private:
    std::vector<std::pair<int, Label>> nodes_;
    std::unordered_map<uint64_t, int> children_;
  };

  bool Insert(std::vector<Token> *tokens, StateId state, const Entry &e);
  void ExpandEpsilon(std::vector<Token> *tokens);
  void ProcessFrame(std::span<const double> row);
  void ScoreWindow(int64_t center_begin, int center_frames);
  Hypothesis MakeHypothesis(const Entry &e) const;

  std::shared_ptr<const Wfst> graph_;
  ChunkConfig chunks_;
  BeamConfig beam_;
  std::shared_ptr<const AcousticScorer> scorer_;
  Label max_ilabel_ = 0;

  std::vector<Token> tokens_;
  std::vector<int> token_index_;  // graph state -> index in the token list being built, -1 if none
  Trie word_trie_;
  Trie unit_trie_;

  // Buffered input: rows [buffer_start_, buffer_start_ + rows) of the stream.
  std::vector<float> buffer_;
  int64_t buffer_start_ = 0;
  int64_t buffered_end_ = 0;
  int feature_dim_ = -1;
  int64_t watermark_ = 0;
  int frames_decoded_ = 0;
  size_t last_survivors_ = 0;
  bool finalized_ = false;
};

// Single-shot decode of a posterior matrix.
NBestList DecodePosteriors(std::shared_ptr<const Wfst> graph, const PosteriorMatrix &post,
                           const BeamConfig &beam, int n);

// Streaming decode of a posterior matrix through a PosteriorTableScorer,
// pushing `push_size` input frames per call (0 = all at once).
NBestList DecodeChunked(std::shared_ptr<const Wfst> graph, const PosteriorMatrix &post,
                        const ChunkConfig &chunks, const BeamConfig &beam, int n,
                        int push_size = 0);

}  // namespace twopass

#endif  // TWOPASS_DECODER_STREAM_DECODER_H_
