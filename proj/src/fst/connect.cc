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

#include "twopass/fst/connect.h"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "twopass/error.h"

namespace twopass {
namespace {

bool IsEpsilonArc(const Arc &arc) { return arc.ilabel == kEpsilon && arc.olabel == kEpsilon; }

// Shortest epsilon distances from `source`. `dist` and `touched` are scratch
// buffers reused across calls; on return `touched` lists the closure.
void EpsilonClosure(const Wfst &a, StateId source, std::vector<double> *dist,
                    std::vector<StateId> *touched) {
  touched->clear();
  (*dist)[source] = 0.0;
  touched->push_back(source);
  std::deque<StateId> queue{source};
  std::vector<char> in_queue(a.NumStates(), 0);
  in_queue[source] = 1;
  size_t relaxations = 0;
  const size_t limit = static_cast<size_t>(a.NumStates()) * (a.NumArcs() + 1) + 16;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    in_queue[q] = 0;
    for (const Arc &arc : a.Arcs(q)) {
      if (!IsEpsilonArc(arc)) continue;
      double d = (*dist)[q] + arc.weight.Value();
      double &cur = (*dist)[arc.next_state];
      if (d < cur) {
        if (++relaxations > limit) throw PreconditionError("negative-weight epsilon cycle");
        if (cur == kInfinity) touched->push_back(arc.next_state);
        cur = d;
        if (!in_queue[arc.next_state]) {
          in_queue[arc.next_state] = 1;
          queue.push_back(arc.next_state);
        }
      }
    }
  }
}

}  // namespace

Wfst RmEpsilon(const Wfst &a) {
  Wfst out;
  out.SetInputSymbols(a.InputSymbols());
  out.SetOutputSymbols(a.OutputSymbols());
  const StateId n = a.NumStates();
  if (a.Start() == kNoState) return out;
  for (StateId s = 0; s < n; ++s) out.AddState();
  out.SetStart(a.Start());

  std::vector<double> dist(n, kInfinity);
  std::vector<StateId> closure;
  for (StateId p = 0; p < n; ++p) {
    EpsilonClosure(a, p, &dist, &closure);
    std::map<std::tuple<Label, Label, StateId>, double> merged;
    double final_weight = kInfinity;
    for (StateId q : closure) {
      double d = dist[q];
      if (a.IsFinal(q)) final_weight = std::min(final_weight, d + a.Final(q).Value());
      for (const Arc &arc : a.Arcs(q)) {
        if (IsEpsilonArc(arc)) continue;
        auto key = std::make_tuple(arc.ilabel, arc.olabel, arc.next_state);
        double w = d + arc.weight.Value();
        auto [it, inserted] = merged.emplace(key, w);
        if (!inserted && w < it->second) it->second = w;
      }
    }
    for (const auto &[key, w] : merged)
      out.AddArc(p, Arc(std::get<0>(key), std::get<1>(key), w, std::get<2>(key)));
    if (final_weight < kInfinity) out.SetFinal(p, final_weight);
    for (StateId q : closure) dist[q] = kInfinity;
  }
  return Trim(out);
}

Wfst Trim(const Wfst &a) {
  const StateId n = a.NumStates();
  Wfst out;
  out.SetInputSymbols(a.InputSymbols());
  out.SetOutputSymbols(a.OutputSymbols());
  if (a.Start() == kNoState) return out;

  std::vector<char> access(n, 0), coaccess(n, 0);
  std::vector<std::vector<StateId>> reverse(n);
  std::vector<StateId> stack{a.Start()};
  access[a.Start()] = 1;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const Arc &arc : a.Arcs(s)) {
      reverse[arc.next_state].push_back(s);
      if (!access[arc.next_state]) {
        access[arc.next_state] = 1;
        stack.push_back(arc.next_state);
      }
    }
  }
  for (StateId s = 0; s < n; ++s) {
    if (access[s] && a.IsFinal(s)) {
      coaccess[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : reverse[s]) {
      if (!coaccess[p]) {
        coaccess[p] = 1;
        stack.push_back(p);
      }
    }
  }
  if (!coaccess[a.Start()]) return out;

  std::vector<StateId> remap(n, kNoState);
  for (StateId s = 0; s < n; ++s)
    if (access[s] && coaccess[s]) remap[s] = out.AddState();
  for (StateId s = 0; s < n; ++s) {
    if (remap[s] == kNoState) continue;
    if (a.IsFinal(s)) out.SetFinal(remap[s], a.Final(s));
    for (const Arc &arc : a.Arcs(s)) {
      if (remap[arc.next_state] == kNoState) continue;
      out.AddArc(remap[s], Arc(arc.ilabel, arc.olabel, arc.weight, remap[arc.next_state]));
    }
  }
  out.SetStart(remap[a.Start()]);
  return out;
}

void ArcSortInPlace(Wfst *a, ArcSortType type) {
  auto by_input = [](const Arc &x, const Arc &y) {
    return std::tie(x.ilabel, x.olabel, x.next_state) < std::tie(y.ilabel, y.olabel, y.next_state);
  };
  auto by_output = [](const Arc &x, const Arc &y) {
    return std::tie(x.olabel, x.ilabel, x.next_state) < std::tie(y.olabel, y.ilabel, y.next_state);
  };
  for (StateId s = 0; s < a->NumStates(); ++s) {
    auto &arcs = a->MutableArcs(s);
    if (type == ArcSortType::kInput)
      std::stable_sort(arcs.begin(), arcs.end(), by_input);
    else
      std::stable_sort(arcs.begin(), arcs.end(), by_output);
  }
}

Wfst ArcSort(const Wfst &a, ArcSortType type) {
  Wfst out = a;
  ArcSortInPlace(&out, type);
  return out;
}

Wfst RelabelToEpsilon(const Wfst &a, std::span<const Label> labels, bool input_side,
                      bool output_side) {
  std::unordered_set<Label> set(labels.begin(), labels.end());
  Wfst out = a;
  for (StateId s = 0; s < out.NumStates(); ++s) {
    for (Arc &arc : out.MutableArcs(s)) {
      if (input_side && set.count(arc.ilabel)) arc.ilabel = kEpsilon;
      if (output_side && set.count(arc.olabel)) arc.olabel = kEpsilon;
    }
  }
  return out;
}

Wfst Project(const Wfst &a, ProjectType type) {
  Wfst out = a;
  for (StateId s = 0; s < out.NumStates(); ++s) {
    for (Arc &arc : out.MutableArcs(s)) {
      if (type == ProjectType::kInput)
        arc.olabel = arc.ilabel;
      else
        arc.ilabel = arc.olabel;
    }
  }
  if (type == ProjectType::kInput)
    out.SetOutputSymbols(a.InputSymbols());
  else
    out.SetInputSymbols(a.OutputSymbols());
  return out;
}

}  // namespace twopass
