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

#include "twopass/decoder/stream_decoder.h"

#include <algorithm>
#include <cmath>
#include <deque>

#include "twopass/error.h"

namespace twopass {
namespace {

constexpr Label kBlankFrameLabel = 1;

bool EntryLess(double cost_a, int words_a, double cost_b, int words_b) {
  return cost_a < cost_b || (cost_a == cost_b && words_a < words_b);
}

}  // namespace

void BeamConfig::Validate() const {
  if (!(beam > 0)) throw ConfigError("beam: beam must be > 0");
  if (max_active < 1) throw ConfigError("beam: max_active must be >= 1");
  if (!(acoustic_scale > 0) || std::isinf(acoustic_scale)) {
    throw ConfigError("beam: acoustic_scale must be a positive finite number");
  }
  if (!std::isfinite(word_insertion_penalty)) {
    throw ConfigError("beam: word_insertion_penalty must be finite");
  }
  if (nbest < 1) throw ConfigError("beam: nbest must be >= 1");
}

int StreamDecoder::Trie::Append(int node, Label label) {
  uint64_t key = (static_cast<uint64_t>(static_cast<uint32_t>(node)) << 32) |
                 static_cast<uint32_t>(label);
  auto [it, inserted] = children_.try_emplace(key, static_cast<int>(nodes_.size()));
  if (inserted) nodes_.emplace_back(node, label);
  return it->second;
}

std::vector<Label> StreamDecoder::Trie::Get(int node) const {
  std::vector<Label> out;
  for (; node > 0; node = nodes_[node].first) out.push_back(nodes_[node].second);
  std::reverse(out.begin(), out.end());
  return out;
}

StreamDecoder::StreamDecoder(std::shared_ptr<const Wfst> graph, ChunkConfig chunks,
                             BeamConfig beam, std::shared_ptr<const AcousticScorer> scorer)
    : graph_(std::move(graph)), chunks_(chunks), beam_(beam), scorer_(std::move(scorer)) {
  if (!graph_) throw ConfigError("decoder: no graph");
  chunks_.Validate();
  beam_.Validate();
  if (graph_->Start() == kNoState) throw ConfigError("decoder: graph has no start state");
  if (!graph_->IsArcSorted(ArcSortType::kInput)) {
    throw PreconditionError("decoder: graph must be arc-sorted on input labels");
  }
  for (StateId s = 0; s < graph_->NumStates(); ++s) {
    for (const Arc &arc : graph_->Arcs(s)) max_ilabel_ = std::max(max_ilabel_, arc.ilabel);
  }
  token_index_.assign(graph_->NumStates(), -1);
  Entry init{0.0, 0.0, 0.0, 0, 0, kNoLabel};
  Insert(&tokens_, graph_->Start(), init);
  ExpandEpsilon(&tokens_);
  for (const Token &t : tokens_) token_index_[t.state] = -1;
}

bool StreamDecoder::Insert(std::vector<Token> *tokens, StateId state, const Entry &e) {
  int &idx = token_index_[state];
  if (idx < 0) {
    idx = static_cast<int>(tokens->size());
    tokens->push_back(Token{state, {e}});
    return true;
  }
  std::vector<Entry> &v = (*tokens)[idx].entries;
  auto place = [&v](const Entry &x) {
    auto pos = std::find_if(v.begin(), v.end(), [&x](const Entry &y) {
      return EntryLess(x.cost, x.words, y.cost, y.words);
    });
    v.insert(pos, x);
  };
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].words != e.words) continue;
    if (!(e.cost < v[i].cost)) return false;
    v.erase(v.begin() + i);
    place(e);
    return true;
  }
  if (v.size() < static_cast<size_t>(beam_.nbest)) {
    place(e);
    return true;
  }
  const Entry &worst = v.back();
  if (!EntryLess(e.cost, e.words, worst.cost, worst.words)) return false;
  v.pop_back();
  place(e);
  return true;
}

void StreamDecoder::ExpandEpsilon(std::vector<Token> *tokens) {
  double best = kInfinity;
  for (const Token &t : *tokens) best = std::min(best, t.entries.front().cost);
  const double cutoff = best + beam_.beam;
  std::deque<int> queue;
  std::vector<char> queued(tokens->size(), 1);
  for (size_t i = 0; i < tokens->size(); ++i) queue.push_back(static_cast<int>(i));
  while (!queue.empty()) {
    int idx = queue.front();
    queue.pop_front();
    queued[idx] = 0;
    StateId s = (*tokens)[idx].state;
    std::vector<Entry> entries = (*tokens)[idx].entries;
    for (const Arc &arc : graph_->Arcs(s)) {
      if (arc.ilabel != kEpsilon) break;  // arcs are input-sorted
      double g = arc.weight.Value();
      if (arc.olabel != kEpsilon) g += beam_.word_insertion_penalty;
      for (const Entry &e : entries) {
        Entry n = e;
        n.cost = e.cost + g;
        if (n.cost > cutoff) continue;
        n.graph = e.graph + g;
        if (arc.olabel != kEpsilon) n.words = word_trie_.Append(e.words, arc.olabel);
        if (Insert(tokens, arc.next_state, n)) {
          int t = token_index_[arc.next_state];
          if (t >= static_cast<int>(queued.size())) queued.resize(t + 1, 0);
          if (!queued[t]) {
            queued[t] = 1;
            queue.push_back(t);
          }
        }
      }
    }
  }
}

void StreamDecoder::ProcessFrame(std::span<const double> row) {
  if (static_cast<Label>(row.size()) < max_ilabel_) {
    throw PreconditionError("decoder: posterior row has " + std::to_string(row.size()) +
                            " tokens but the graph uses frame label " +
                            std::to_string(max_ilabel_));
  }
  std::vector<int> order(tokens_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [this](int a, int b) {
    double ca = tokens_[a].entries.front().cost, cb = tokens_[b].entries.front().cost;
    return ca < cb || (ca == cb && tokens_[a].state < tokens_[b].state);
  });
  double cutoff = order.empty() ? kInfinity : tokens_[order[0]].entries.front().cost + beam_.beam;
  if (order.size() > static_cast<size_t>(beam_.max_active)) order.resize(beam_.max_active);

  std::vector<Token> next;
  double next_best = kInfinity;
  last_survivors_ = 0;
  for (int idx : order) {
    const Token &tok = tokens_[idx];
    if (tok.entries.front().cost > cutoff) break;
    ++last_survivors_;
    for (const Arc &arc : graph_->Arcs(tok.state)) {
      if (arc.ilabel == kEpsilon) continue;
      double ac = -beam_.acoustic_scale * row[arc.ilabel - 1];
      if (std::isinf(ac)) continue;
      double g = arc.weight.Value();
      if (arc.olabel != kEpsilon) g += beam_.word_insertion_penalty;
      for (const Entry &e : tok.entries) {
        if (e.cost > cutoff) break;
        Entry n;
        n.cost = e.cost + g + ac;
        if (n.cost > next_best + beam_.beam) continue;
        n.graph = e.graph + g;
        n.acoustic = e.acoustic + ac;
        n.words = arc.olabel != kEpsilon ? word_trie_.Append(e.words, arc.olabel) : e.words;
        n.units = e.units;
        n.last_frame_label = arc.ilabel;
        if (arc.ilabel != kBlankFrameLabel && arc.ilabel != e.last_frame_label) {
          n.units = unit_trie_.Append(e.units, arc.ilabel - 1);
        }
        next_best = std::min(next_best, n.cost);
        Insert(&next, arc.next_state, n);
      }
    }
  }
  ExpandEpsilon(&next);
  for (const Token &t : next) token_index_[t.state] = -1;
  tokens_ = std::move(next);
  ++frames_decoded_;
}

void StreamDecoder::AdvancePosteriors(const PosteriorMatrix &rows) {
  if (finalized_) throw StateError("decoder: session already finalized");
  for (int t = 0; t < rows.NumFrames(); ++t) ProcessFrame(rows.Row(t));
}

void StreamDecoder::ScoreWindow(int64_t center_begin, int center_frames) {
  const int dim = std::max(feature_dim_, 0);
  const int64_t left_begin = std::max<int64_t>(0, center_begin - chunks_.n_left);
  const int64_t right_end = center_begin + center_frames + chunks_.n_right;
  const int64_t avail_end = std::min(right_end, buffered_end_);
  std::vector<float> window(static_cast<size_t>(right_end - left_begin) * dim, 0.0f);
  std::copy(buffer_.begin() + (left_begin - buffer_start_) * dim,
            buffer_.begin() + (avail_end - buffer_start_) * dim, window.begin());
  FeatureWindow w;
  w.data = window;
  w.dim = dim;
  w.left_frames = static_cast<int>(center_begin - left_begin);
  w.center_frames = center_frames;
  w.right_frames = chunks_.n_right;
  w.center_start = center_begin;
  w.subsample = chunks_.subsample;
  PosteriorMatrix rows = scorer_->Score(w);
  int expected = (center_frames + chunks_.subsample - 1) / chunks_.subsample;
  if (rows.NumFrames() != expected) {
    throw PreconditionError("decoder: scorer returned " + std::to_string(rows.NumFrames()) +
                            " rows, expected " + std::to_string(expected));
  }
  for (int t = 0; t < rows.NumFrames(); ++t) ProcessFrame(rows.Row(t));
}

int StreamDecoder::PushFrames(const FeatureMatrix &frames) {
  if (finalized_) throw StateError("decoder: push after finalize");
  if (frames.NumRows() == 0) return 0;
  if (!scorer_) throw ConfigError("decoder: no acoustic scorer attached");
  if (feature_dim_ < 0) feature_dim_ = frames.Dim();
  if (frames.Dim() != feature_dim_) {
    throw PreconditionError("decoder: feature dimension changed from " +
                            std::to_string(feature_dim_) + " to " + std::to_string(frames.Dim()));
  }
  for (int r = 0; r < frames.NumRows(); ++r) {
    auto row = frames.Row(r);
    buffer_.insert(buffer_.end(), row.begin(), row.end());
  }
  buffered_end_ += frames.NumRows();

  const int before = frames_decoded_;
  while (buffered_end_ >= watermark_ + chunks_.n_center + chunks_.n_right) {
    ScoreWindow(watermark_, chunks_.n_center);
    watermark_ += chunks_.n_center;
  }
  // Drop rows no future window can see.
  int64_t keep_from = std::max<int64_t>(buffer_start_, watermark_ - chunks_.n_left);
  if (keep_from > buffer_start_) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + (keep_from - buffer_start_) * feature_dim_);
    buffer_start_ = keep_from;
  }
  return frames_decoded_ - before;
}

Hypothesis StreamDecoder::MakeHypothesis(const Entry &e) const {
  Hypothesis h;
  h.words = word_trie_.Get(e.words);
  h.units = unit_trie_.Get(e.units);
  h.graph_cost = e.graph;
  h.acoustic_cost = e.acoustic;
  return h;
}

NBestList StreamDecoder::Finalize(int n) {
  if (finalized_) throw StateError("decoder: session already finalized");
  if (n < 1) throw ConfigError("decoder: n must be >= 1");
  if (n > beam_.nbest) {
    throw ConfigError("decoder: n=" + std::to_string(n) + " exceeds BeamConfig nbest=" +
                      std::to_string(beam_.nbest));
  }
  while (watermark_ < buffered_end_) {
    int center = static_cast<int>(std::min<int64_t>(chunks_.n_center, buffered_end_ - watermark_));
    ScoreWindow(watermark_, center);
    watermark_ += center;
  }
  finalized_ = true;

  struct Final {
    Entry entry;
    double total;
  };
  std::unordered_map<int, Final> best;  // keyed by word history
  for (const Token &tok : tokens_) {
    TropicalWeight fw = graph_->Final(tok.state);
    if (fw.IsZero()) continue;
    for (const Entry &e : tok.entries) {
      Entry f = e;
      f.cost = e.cost + fw.Value();
      f.graph = e.graph + fw.Value();
      auto it = best.find(f.words);
      if (it == best.end() || f.cost < it->second.total ||
          (f.cost == it->second.total && f.units < it->second.entry.units)) {
        best[f.words] = Final{f, f.cost};
      }
    }
  }
  if (best.empty()) {
    const Entry *top = nullptr;
    for (const Token &tok : tokens_) {
      const Entry &e = tok.entries.front();
      if (!top || EntryLess(e.cost, e.words, top->cost, top->words)) top = &e;
    }
    std::vector<int> partial;
    if (top) {
      for (Label w : word_trie_.Get(top->words)) partial.push_back(w);
    }
    throw EmptyResultError("decoder: no token reached a final state after " +
                               std::to_string(frames_decoded_) + " frames",
                           std::move(partial));
  }
  std::vector<Final> all;
  all.reserve(best.size());
  for (auto &[k, f] : best) all.push_back(f);
  std::sort(all.begin(), all.end(), [](const Final &a, const Final &b) {
    return EntryLess(a.total, a.entry.words, b.total, b.entry.words);
  });
  if (all.size() > static_cast<size_t>(n)) all.resize(n);
  NBestList out;
  for (const Final &f : all) out.push_back(MakeHypothesis(f.entry));
  return out;
}

std::vector<std::pair<StateId, double>> StreamDecoder::ActiveTokens() const {
  std::vector<std::pair<StateId, double>> out;
  for (const Token &t : tokens_) out.emplace_back(t.state, t.entries.front().cost);
  std::sort(out.begin(), out.end());
  return out;
}

NBestList DecodePosteriors(std::shared_ptr<const Wfst> graph, const PosteriorMatrix &post,
                           const BeamConfig &beam, int n) {
  ChunkConfig chunks;
  StreamDecoder session(std::move(graph), chunks, beam, nullptr);
  session.AdvancePosteriors(post);
  return session.Finalize(n);
}

NBestList DecodeChunked(std::shared_ptr<const Wfst> graph, const PosteriorMatrix &post,
                        const ChunkConfig &chunks, const BeamConfig &beam, int n,
                        int push_size) {
  auto scorer = std::make_shared<PosteriorTableScorer>(post);
  StreamDecoder session(std::move(graph), chunks, beam, scorer);
  FeatureMatrix feats = PlaceholderFeatures(post.NumFrames(), chunks.subsample);
  if (push_size <= 0) push_size = feats.NumRows();
  for (int begin = 0; begin < feats.NumRows(); begin += push_size) {
    session.PushFrames(feats.RowRange(begin, begin + push_size));
  }
  return session.Finalize(n);
}

}  // namespace twopass
