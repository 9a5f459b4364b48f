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

#ifndef TWOPASS_FST_DETERMINIZE_H_
#define TWOPASS_FST_DETERMINIZE_H_

#include <cstddef>

#include "twopass/fst/wfst.h"

namespace twopass {

struct DeterminizeOptions {
  size_t max_states = 1000000;
};

// Weighted subset construction over (ilabel, olabel) pairs. Epsilon:epsilon
// arcs are removed first. The result has at most one arc per state and label
// pair, hence at most one arc per input label for acceptors. Throws
// BudgetError when more than `max_states` subsets are created.
Wfst Determinize(const Wfst &a, const DeterminizeOptions &opts = {});

}  // namespace twopass

#endif  // TWOPASS_FST_DETERMINIZE_H_
