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

#ifndef TWOPASS_CTC_POSTERIOR_H_
#define TWOPASS_CTC_POSTERIOR_H_

#include <cmath>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "twopass/fst/symbol_table.h"

namespace twopass {

// Token ids without blank; every id is in [1, tokens).
using LabelSequence = std::vector<Label>;

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline double LogAdd(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

double LogSumExp(std::span<const double> values);

// Dense row-major matrix of floats read from and written to the "POST1"
// container: magic, u32 rows, u32 cols, rows*cols little-endian f32.
struct MatrixData {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
};
MatrixData ReadMatrix(const std::string &path);  // binary or text by magic
MatrixData ReadMatrixBinary(std::istream &in);
MatrixData ReadMatrixText(std::istream &in);  // one row per line
void WriteMatrixBinary(const MatrixData &m, std::ostream &out);
void WriteMatrixText(const MatrixData &m, std::ostream &out);

// Frame-major CTC log-posteriors in nats; column 0 is blank. Construction
// does not check normalization; Validate() does, and the file readers call
// it once at load.
class PosteriorMatrix {
 public:
  PosteriorMatrix() = default;
  PosteriorMatrix(int frames, int tokens, std::vector<double> log_probs);

  int NumFrames() const { return frames_; }
  int NumTokens() const { return tokens_; }
  double operator()(int t, int k) const { return values_[static_cast<size_t>(t) * tokens_ + k]; }
  double &At(int t, int k) { return values_[static_cast<size_t>(t) * tokens_ + k]; }
  std::span<const double> Row(int t) const {
    return {values_.data() + static_cast<size_t>(t) * tokens_, static_cast<size_t>(tokens_)};
  }
  const std::vector<double> &Values() const { return values_; }

  // Rows [begin, end), clamped to the matrix.
  PosteriorMatrix Rows(int begin, int end) const;
  // Appends the rows of `other`; token counts must agree.
  void Append(const PosteriorMatrix &other);

  // Throws FormatError unless every row log-sum-exps to 0 within `tol`.
  void Validate(double tol = 1e-5) const;

  static PosteriorMatrix Read(const std::string &path);
  void Write(const std::string &path, bool binary = true) const;

 private:
  int frames_ = 0;
  int tokens_ = 0;
  std::vector<double> values_;
};

}  // namespace twopass

#endif  // TWOPASS_CTC_POSTERIOR_H_
