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

#ifndef TWOPASS_DECODER_ACOUSTIC_SCORER_H_
#define TWOPASS_DECODER_ACOUSTIC_SCORER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twopass/ctc/posterior.h"

namespace twopass {

// Input feature rows, row-major. A zero dimension is allowed for scorers
// that only look at frame positions.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(int rows, int dim, std::vector<float> data);
  static FeatureMatrix Read(const std::string &path);  // POST1 container or text

  int NumRows() const { return rows_; }
  int Dim() const { return dim_; }
  std::span<const float> Row(int r) const {
    return {data_.data() + static_cast<size_t>(r) * dim_, static_cast<size_t>(dim_)};
  }
  FeatureMatrix RowRange(int begin, int end) const;

 private:
  int rows_ = 0;
  int dim_ = 0;
  std::vector<float> data_;
};

// Placeholder features for posterior-driven decoding: frames*subsample rows
// of dimension 0.
FeatureMatrix PlaceholderFeatures(int posterior_frames, int subsample);

struct FeatureWindow {
  std::span<const float> data;  // (left + center + right) rows of `dim` values
  int dim = 0;
  int left_frames = 0;
  int center_frames = 0;
  int right_frames = 0;   // includes zero padding at the end of input
  int64_t center_start = 0;  // absolute index of the first center frame
  int subsample = 4;
};

// Maps a window of input frames to posterior rows for its center region
// only: ceil(center_frames / subsample) rows. Implementations keep no state
// between windows and must allow concurrent calls.
class AcousticScorer {
 public:
  virtual ~AcousticScorer() = default;
  virtual PosteriorMatrix Score(const FeatureWindow &window) const = 0;
};

// Serves rows of a precomputed posterior matrix by window position.
class PosteriorTableScorer : public AcousticScorer {
 public:
  explicit PosteriorTableScorer(PosteriorMatrix table) : table_(std::move(table)) {}
  PosteriorMatrix Score(const FeatureWindow &window) const override;
  const PosteriorMatrix &Table() const { return table_; }

 private:
  PosteriorMatrix table_;
};

}  // namespace twopass

#endif  // TWOPASS_DECODER_ACOUSTIC_SCORER_H_
