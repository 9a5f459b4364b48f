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

#ifndef TWOPASS_EVAL_CER_H_
#define TWOPASS_EVAL_CER_H_

#include <string>
#include <string_view>
#include <vector>

namespace twopass {

struct EditCounts {
  int ref_len = 0;
  int hyp_len = 0;
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int Errors() const { return substitutions + deletions + insertions; }
};

// Minimal edit script between two symbol sequences. Among minimal scripts the
// backtrace prefers match/substitution, then deletion, then insertion.
EditCounts AlignSymbols(const std::vector<std::string> &ref, const std::vector<std::string> &hyp);

// Character-level alignment of UTF-8 texts with whitespace removed.
EditCounts CharacterErrors(std::string_view ref, std::string_view hyp);

// (S + D + I) / ref_len; for an empty reference, the insertion count.
double Cer(const EditCounts &counts);

struct EvalReport {
  int utterances = 0;
  int ref_chars = 0;
  int hyp_chars = 0;
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int empty_references = 0;  // scored as raw insertion counts
  double rtf = -1.0;         // negative when not measured

  void Add(const EditCounts &counts);
  double Cer() const;
  std::string Summary() const;    // human-readable
  std::string KeyValues() const;  // key=value per line
};

}  // namespace twopass

#endif  // TWOPASS_EVAL_CER_H_
