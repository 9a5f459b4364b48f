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

#include "twopass/fst/minimize.h"

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "twopass/error.h"
#include "twopass/fst/connect.h"

namespace twopass {
namespace {

struct Signature {
  int own_class;
  std::vector<std::tuple<Label, Label, double, int>> arcs;
  auto operator<=>(const Signature &) const = default;
};

}  // namespace

Wfst Minimize(const Wfst &input) {
  if (!input.IsPairDeterministic())
    throw PreconditionError("minimize requires a deterministic machine");
  Wfst a = Trim(input);
  const StateId n = a.NumStates();
  if (n == 0) return a;

  // Initial partition by final weight.
  std::vector<int> cls(n);
  {
    std::map<double, int> by_final;
    for (StateId s = 0; s < n; ++s) {
      double f = a.Final(s).Value();
      auto it = by_final.emplace(f, static_cast<int>(by_final.size())).first;
      cls[s] = it->second;
    }
  }

  size_t num_classes = 0;
  for (;;) {
    std::map<Signature, int> index;
    std::vector<int> next(n);
    for (StateId s = 0; s < n; ++s) {
      Signature sig{cls[s], {}};
      for (const Arc &arc : a.Arcs(s))
        sig.arcs.emplace_back(arc.ilabel, arc.olabel, arc.weight.Value(), cls[arc.next_state]);
      std::sort(sig.arcs.begin(), sig.arcs.end());
      auto it = index.emplace(std::move(sig), static_cast<int>(index.size())).first;
      next[s] = it->second;
    }
    cls.swap(next);
    if (index.size() == num_classes) break;
    num_classes = index.size();
  }

  // Renumber classes by first occurrence so the start class maps to the
  // lowest state id reached first.
  std::vector<int> remap(num_classes, -1);
  std::vector<StateId> representative;
  for (StateId s = 0; s < n; ++s) {
    if (remap[cls[s]] < 0) {
      remap[cls[s]] = static_cast<int>(representative.size());
      representative.push_back(s);
    }
  }
  Wfst out;
  out.SetInputSymbols(a.InputSymbols());
  out.SetOutputSymbols(a.OutputSymbols());
  for (size_t i = 0; i < representative.size(); ++i) out.AddState();
  for (size_t i = 0; i < representative.size(); ++i) {
    StateId rep = representative[i];
    if (a.IsFinal(rep)) out.SetFinal(static_cast<StateId>(i), a.Final(rep));
    for (const Arc &arc : a.Arcs(rep))
      out.AddArc(static_cast<StateId>(i),
                 Arc(arc.ilabel, arc.olabel, arc.weight, remap[cls[arc.next_state]]));
  }
  out.SetStart(remap[cls[a.Start()]]);
  return out;
}

}  // namespace twopass
