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

#include "twopass/fst/determinize.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "twopass/error.h"
#include "twopass/fst/connect.h"

namespace twopass {
namespace {

// Residual weights are compared on a 1e-9 grid so that subsets reached along
// different paths with round-off differences are shared.
constexpr double kQuantum = 1e-9;

struct Element {
  StateId state;
  double residual;
};

using Subset = std::vector<Element>;  // sorted by state, unique states

struct SubsetKey {
  std::vector<std::pair<StateId, long long>> items;
  bool operator==(const SubsetKey &) const = default;
};

struct SubsetKeyHash {
  size_t operator()(const SubsetKey &k) const {
    size_t h = k.items.size();
    for (const auto &[s, q] : k.items) {
      h ^= std::hash<long long>()(q) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= std::hash<int>()(s) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

SubsetKey MakeKey(const Subset &subset) {
  SubsetKey key;
  key.items.reserve(subset.size());
  for (const auto &e : subset) key.items.emplace_back(e.state, std::llround(e.residual / kQuantum));
  return key;
}

}  // namespace

Wfst Determinize(const Wfst &input, const DeterminizeOptions &opts) {
  Wfst eps_free;
  const Wfst *a = &input;
  if (input.HasEpsilonArcs()) {
    eps_free = RmEpsilon(input);
    a = &eps_free;
  }

  Wfst out;
  out.SetInputSymbols(input.InputSymbols());
  out.SetOutputSymbols(input.OutputSymbols());
  if (a->Start() == kNoState) return out;

  std::unordered_map<SubsetKey, StateId, SubsetKeyHash> ids;
  std::vector<Subset> subsets;
  std::deque<StateId> queue;

  auto find_or_add = [&](Subset subset) -> StateId {
    SubsetKey key = MakeKey(subset);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (subsets.size() >= opts.max_states)
      throw BudgetError("determinization exceeded the state budget of " +
                        std::to_string(opts.max_states) + " states");
    StateId id = out.AddState();
    double final_weight = kInfinity;
    for (const auto &e : subset) {
      TropicalWeight f = a->Final(e.state);
      if (!f.IsZero()) final_weight = std::min(final_weight, e.residual + f.Value());
    }
    if (final_weight < kInfinity) out.SetFinal(id, final_weight);
    ids.emplace(std::move(key), id);
    subsets.push_back(std::move(subset));
    queue.push_back(id);
    return id;
  };

  out.SetStart(find_or_add({{a->Start(), 0.0}}));

  // (ilabel, olabel) -> next state -> best residual-adjusted weight
  std::map<std::pair<Label, Label>, std::map<StateId, double>> groups;
  while (!queue.empty()) {
    StateId id = queue.front();
    queue.pop_front();
    groups.clear();
    for (const auto &e : subsets[id]) {
      for (const Arc &arc : a->Arcs(e.state)) {
        double w = e.residual + arc.weight.Value();
        auto &dest = groups[{arc.ilabel, arc.olabel}];
        auto [it, inserted] = dest.emplace(arc.next_state, w);
        if (!inserted && w < it->second) it->second = w;
      }
    }
    for (const auto &[labels, dest] : groups) {
      double best = kInfinity;
      for (const auto &[s, w] : dest) best = std::min(best, w);
      Subset next;
      next.reserve(dest.size());
      for (const auto &[s, w] : dest) next.push_back({s, w - best});
      StateId next_id = find_or_add(std::move(next));
      out.AddArc(id, Arc(labels.first, labels.second, best, next_id));
    }
  }
  return out;
}

}  // namespace twopass
