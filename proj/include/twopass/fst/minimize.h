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

#ifndef TWOPASS_FST_MINIMIZE_H_
#define TWOPASS_FST_MINIMIZE_H_

#include "twopass/fst/wfst.h"

namespace twopass {

// Merges equivalent states of a pair-deterministic machine by partition
// refinement on (final weight, outgoing (ilabel, olabel, weight, class)).
// Weights are not pushed, so two states are merged only when their suffix
// weights agree arc by arc. Throws PreconditionError on nondeterministic
// input.
Wfst Minimize(const Wfst &a);

}  // namespace twopass

#endif  // TWOPASS_FST_MINIMIZE_H_
