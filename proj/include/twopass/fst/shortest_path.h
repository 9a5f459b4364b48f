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

#ifndef TWOPASS_FST_SHORTEST_PATH_H_
#define TWOPASS_FST_SHORTEST_PATH_H_

#include <cstddef>
#include <vector>

#include "twopass/fst/wfst.h"

namespace twopass {

struct Path {
  std::vector<Label> ilabels;  // epsilons removed
  std::vector<Label> olabels;
  double weight = kInfinity;
};

// Cost of the best path from every state to a final state (including the
// final weight); +inf where none exists. Bellman-Ford style relaxation, so
// negative arc weights are allowed as long as no negative cycle exists.
std::vector<double> ShortestDistanceToFinal(const Wfst &a);

// The n lowest-weight successful paths, ascending by weight. Distinct paths
// may carry identical label strings. Returns fewer than n when fewer exist.
std::vector<Path> ShortestPaths(const Wfst &a, size_t n);

}  // namespace twopass

#endif  // TWOPASS_FST_SHORTEST_PATH_H_
