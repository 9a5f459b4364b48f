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

#ifndef TWOPASS_DECODER_CHUNK_CONFIG_H_
#define TWOPASS_DECODER_CHUNK_CONFIG_H_

#include <string>

namespace twopass {

// Chunking of the input frame stream. All sizes are in input frames (before
// subsampling). Each decode step scores a window of n_left history frames,
// n_center new frames and n_right look-ahead frames, and advances by
// n_center.
struct ChunkConfig {
  int n_left = 160;
  int n_center = 64;
  int n_right = 32;
  int frame_shift_ms = 10;
  int subsample = 4;

  // Throws ConfigError unless n_center >= subsample, contexts are
  // non-negative and every size is a multiple of subsample.
  void Validate() const;
  int WindowFrames() const { return n_left + n_center + n_right; }
  int PosteriorFramesPerChunk() const { return n_center / subsample; }
};

// Algorithmic latency: (n_center + n_right) * frame_shift_ms. n_left does
// not contribute.
double LatencyMs(const ChunkConfig &chunks);

// Parses "Nl,Nc,Nr" into a config with default shift and subsampling.
ChunkConfig ParseChunkConfig(const std::string &text);

}  // namespace twopass

#endif  // TWOPASS_DECODER_CHUNK_CONFIG_H_
