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

#include "twopass/eval/cer.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "twopass/text.h"

namespace twopass {

EditCounts AlignSymbols(const std::vector<std::string> &ref, const std::vector<std::string> &hyp) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<int> d((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> int & { return d[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      int diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  EditCounts c;
  c.ref_len = static_cast<int>(n);
  c.hyp_len = static_cast<int>(m);
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      if (ref[i - 1] != hyp[j - 1]) ++c.substitutions;
      --i;
      --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++c.deletions;
      --i;
    } else {
      ++c.insertions;
      --j;
    }
  }
  return c;
}

EditCounts CharacterErrors(std::string_view ref, std::string_view hyp) {
  return AlignSymbols(SplitUtf8(StripWhitespace(ref)), SplitUtf8(StripWhitespace(hyp)));
}

double Cer(const EditCounts &counts) {
  if (counts.ref_len == 0) return counts.insertions;
  return static_cast<double>(counts.Errors()) / counts.ref_len;
}

void EvalReport::Add(const EditCounts &counts) {
  ++utterances;
  ref_chars += counts.ref_len;
  hyp_chars += counts.hyp_len;
  substitutions += counts.substitutions;
  deletions += counts.deletions;
  insertions += counts.insertions;
  if (counts.ref_len == 0) ++empty_references;
}

double EvalReport::Cer() const {
  int errors = substitutions + deletions + insertions;
  if (ref_chars == 0) return errors;
  return static_cast<double>(errors) / ref_chars;
}

std::string EvalReport::Summary() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "CER %.2f%% [S=%d D=%d I=%d / %d chars, %d utterances]",
                100.0 * Cer(), substitutions, deletions, insertions, ref_chars, utterances);
  std::string out = buf;
  if (empty_references) out += " (" + std::to_string(empty_references) + " empty references)";
  if (rtf >= 0) {
    std::snprintf(buf, sizeof(buf), " RTF %.4f", rtf);
    out += buf;
  }
  return out;
}

std::string EvalReport::KeyValues() const {
  std::ostringstream out;
  out.precision(10);
  out << "utterances=" << utterances << "\n"
      << "ref_chars=" << ref_chars << "\n"
      << "hyp_chars=" << hyp_chars << "\n"
      << "substitutions=" << substitutions << "\n"
      << "deletions=" << deletions << "\n"
      << "insertions=" << insertions << "\n"
      << "empty_references=" << empty_references << "\n"
      << "cer=" << Cer() << "\n";
  if (rtf >= 0) out << "rtf=" << rtf << "\n";
  return out.str();
}

}  // namespace twopass
