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

#include "twopass/ctc/posterior.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "twopass/error.h"

namespace twopass {
namespace {

constexpr char kMagic[] = "POST1";
constexpr size_t kMagicLen = 5;

}  // namespace

double LogSumExp(std::span<const double> values) {
  double best = kLogZero;
  for (double v : values) best = std::max(best, v);
  if (best == kLogZero) return kLogZero;
  if (std::isinf(best)) return best;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - best);
  return best + std::log(sum);
}

MatrixData ReadMatrixBinary(std::istream &in) {
  char magic[kMagicLen];
  if (!in.read(magic, kMagicLen) || std::memcmp(magic, kMagic, kMagicLen) != 0)
    throw FormatError("bad magic: not a POST1 matrix");
  uint32_t rows = 0, cols = 0;
  if (!in.read(reinterpret_cast<char *>(&rows), 4) || !in.read(reinterpret_cast<char *>(&cols), 4))
    throw FormatError("truncated POST1 header");
  std::vector<float> raw(static_cast<size_t>(rows) * cols);
  if (!in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size() * 4)))
    throw FormatError("truncated POST1 body");
  MatrixData m{static_cast<int>(rows), static_cast<int>(cols), {}};
  m.values.assign(raw.begin(), raw.end());
  return m;
}

MatrixData ReadMatrixText(std::istream &in) {
  MatrixData m;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::vector<double> row;
    for (std::string tok; fields >> tok;) {
      try {
        row.push_back(tok == "-inf" ? kLogZero : std::stod(tok));
      } catch (const std::logic_error &) {
        throw FormatError("matrix text line " + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
    }
    if (row.empty()) continue;
    if (m.rows == 0) m.cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != m.cols)
      throw FormatError("matrix text line " + std::to_string(lineno) + ": expected " +
                        std::to_string(m.cols) + " columns");
    m.values.insert(m.values.end(), row.begin(), row.end());
    ++m.rows;
  }
  return m;
}

MatrixData ReadMatrix(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open matrix " + path);
  char magic[kMagicLen] = {};
  in.read(magic, kMagicLen);
  bool binary = in.gcount() == static_cast<std::streamsize>(kMagicLen) &&
                std::memcmp(magic, kMagic, kMagicLen) == 0;
  in.clear();
  in.seekg(0);
  return binary ? ReadMatrixBinary(in) : ReadMatrixText(in);
}

void WriteMatrixBinary(const MatrixData &m, std::ostream &out) {
  out.write(kMagic, kMagicLen);
  uint32_t rows = static_cast<uint32_t>(m.rows), cols = static_cast<uint32_t>(m.cols);
  out.write(reinterpret_cast<const char *>(&rows), 4);
  out.write(reinterpret_cast<const char *>(&cols), 4);
  std::vector<float> raw(m.values.begin(), m.values.end());
  out.write(reinterpret_cast<const char *>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
}

void WriteMatrixText(const MatrixData &m, std::ostream &out) {
  out.precision(9);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      if (c) out << ' ';
      out << m.values[static_cast<size_t>(r) * m.cols + c];
    }
    out << '\n';
  }
}

PosteriorMatrix::PosteriorMatrix(int frames, int tokens, std::vector<double> log_probs)
    : frames_(frames), tokens_(tokens), values_(std::move(log_probs)) {
  if (frames < 0 || tokens < 0 || values_.size() != static_cast<size_t>(frames) * tokens)
    throw FormatError("posterior matrix size mismatch");
}

PosteriorMatrix PosteriorMatrix::Rows(int begin, int end) const {
  begin = std::clamp(begin, 0, frames_);
  end = std::clamp(end, begin, frames_);
  std::vector<double> v(values_.begin() + static_cast<size_t>(begin) * tokens_,
                        values_.begin() + static_cast<size_t>(end) * tokens_);
  return PosteriorMatrix(end - begin, tokens_, std::move(v));
}

void PosteriorMatrix::Append(const PosteriorMatrix &other) {
  if (other.frames_ == 0) return;
  if (frames_ == 0 && tokens_ == 0) tokens_ = other.tokens_;
  if (other.tokens_ != tokens_) throw FormatError("posterior token count mismatch");
  values_.insert(values_.end(), other.values_.begin(), other.values_.end());
  frames_ += other.frames_;
}

void PosteriorMatrix::Validate(double tol) const {
  if (tokens_ < 1) throw FormatError("posterior matrix has no columns");
  for (int t = 0; t < frames_; ++t) {
    for (double v : Row(t))
      if (std::isnan(v) || v > tol) throw FormatError("posterior row " + std::to_string(t) +
                                                     " has an invalid log-probability");
    double s = LogSumExp(Row(t));
    if (!(std::abs(s) <= tol))
      throw FormatError("posterior row " + std::to_string(t) + " is not normalized (log-sum-exp " +
                        std::to_string(s) + ")");
  }
}

PosteriorMatrix PosteriorMatrix::Read(const std::string &path) {
  MatrixData m = ReadMatrix(path);
  PosteriorMatrix post(m.rows, m.cols, std::move(m.values));
  try {
    post.Validate();
  } catch (const FormatError &e) {
    throw FormatError(path + ": " + e.what());
  }
  return post;
}

void PosteriorMatrix::Write(const std::string &path, bool binary) const {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot write posteriors " + path);
  MatrixData m{frames_, tokens_, values_};
  if (binary)
    WriteMatrixBinary(m, out);
  else
    WriteMatrixText(m, out);
}

}  // namespace twopass
