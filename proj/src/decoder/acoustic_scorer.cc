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

#include "twopass/decoder/acoustic_scorer.h"

#include "twopass/error.h"

namespace twopass {

FeatureMatrix::FeatureMatrix(int rows, int dim, std::vector<float> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
  if (rows < 0 || dim < 0 || data_.size() != static_cast<size_t>(rows) * dim) {
    throw FormatError("features: data size does not match " + std::to_string(rows) + "x" +
                      std::to_string(dim));
  }
}

FeatureMatrix FeatureMatrix::Read(const std::string &path) {
  MatrixData m = ReadMatrix(path);
  std::vector<float> data(m.values.begin(), m.values.end());
  return FeatureMatrix(m.rows, m.cols, std::move(data));
}

FeatureMatrix FeatureMatrix::RowRange(int begin, int end) const {
  begin = std::max(begin, 0);
  end = std::min(end, rows_);
  if (end <= begin) return FeatureMatrix(0, dim_, {});
  std::vector<float> data(data_.begin() + static_cast<ptrdiff_t>(begin) * dim_,
                          data_.begin() + static_cast<ptrdiff_t>(end) * dim_);
  return FeatureMatrix(end - begin, dim_, std::move(data));
}

FeatureMatrix PlaceholderFeatures(int posterior_frames, int subsample) {
  return FeatureMatrix(posterior_frames * subsample, 0, {});
}

PosteriorMatrix PosteriorTableScorer::Score(const FeatureWindow &window) const {
  if (window.subsample < 1 || window.center_start % window.subsample != 0) {
    throw PreconditionError("table scorer: window not aligned to subsampling");
  }
  int begin = static_cast<int>(window.center_start / window.subsample);
  int rows = (window.center_frames + window.subsample - 1) / window.subsample;
  if (begin + rows > table_.NumFrames()) {
    throw PreconditionError("table scorer: window past end of posterior table (" +
                            std::to_string(begin + rows) + " > " +
                            std::to_string(table_.NumFrames()) + " rows)");
  }
  return table_.Rows(begin, begin + rows);
}

}  // namespace twopass
