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

#ifndef TWOPASS_FST_ENUMERATE_H_
#define TWOPASS_FST_ENUMERATE_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "twopass/fst/wfst.h"

namespace twopass {

struct PathKey {
  std::vector<Label> input;
  std::vector<Label> output;
  auto operator<=>(const PathKey &) const = default;
};

using WeightedLanguage = std::map<PathKey, double>;

// Exact weighted relation of `a` restricted to paths whose input and output
// strings both have at most `max_len` non-epsilon labels. Each key maps to
// the minimum weight over all such paths. Brute force; meant as a test oracle
// on small machines.
WeightedLanguage PathEnumerate(const Wfst &a, size_t max_len);

// Same, keyed by input string only (output strings are ignored).
std::map<std::vector<Label>, double> PathEnumerateInput(const Wfst &a, size_t max_len);

// Compares two weighted languages; on mismatch writes a description to
// `diff` (if non-null) and returns false.
bool LanguagesEqual(const WeightedLanguage &a, const WeightedLanguage &b,
                    double tol = 1e-9, std::string *diff = nullptr);

}  // namespace twopass

#endif  // TWOPASS_FST_ENUMERATE_H_
