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

#ifndef TWOPASS_FST_CONNECT_H_
#define TWOPASS_FST_CONNECT_H_

#include <span>
#include <utility>

#include "twopass/fst/wfst.h"

namespace twopass {

// Removes epsilon:epsilon arcs, folding their weights into the arcs and final
// weights reachable through them. Arcs with exactly one epsilon side are
// kept (they carry a label on the other side).
Wfst RmEpsilon(const Wfst &a);

// Keeps only states that are both accessible and coaccessible; states are
// renumbered in their original order. Returns an empty machine when no
// final state is reachable.
Wfst Trim(const Wfst &a);

Wfst ArcSort(const Wfst &a, ArcSortType type);
void ArcSortInPlace(Wfst *a, ArcSortType type);

// Replaces the listed labels by epsilon on the chosen side(s).
Wfst RelabelToEpsilon(const Wfst &a, std::span<const Label> labels,
                      bool input_side, bool output_side);

enum class ProjectType { kInput, kOutput };
Wfst Project(const Wfst &a, ProjectType type);

}  // namespace twopass

#endif  // TWOPASS_FST_CONNECT_H_
