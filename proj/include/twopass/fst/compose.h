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

#ifndef TWOPASS_FST_COMPOSE_H_
#define TWOPASS_FST_COMPOSE_H_

#include "twopass/fst/wfst.h"

namespace twopass {

struct ComposeOptions {
  bool connect = true;  // trim the result
};

// Eager composition a ∘ b. The output symbols of `a` and input symbols of `b`
// must be the same table when both are set (ConfigError otherwise). If `b` is
// not arc-sorted on input labels a sorted copy is used.
//
// Epsilons are matched through the three-state epsilon filter: from a filter
// state of 0 any move is allowed; once `a` has moved alone on an output
// epsilon (filter 1) `b` may not move alone until a real label is matched,
// and vice versa (filter 2). Simultaneous epsilon moves are only taken from
// filter 0. Every pair of epsilon paths is therefore produced exactly once.
Wfst Compose(const Wfst &a, const Wfst &b, const ComposeOptions &opts = {});

}  // namespace twopass

#endif  // TWOPASS_FST_COMPOSE_H_
