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

#include "twopass/fst/shortest_path.h"

#include <algorithm>
#include <deque>
#include <queue>
#include <tuple>
#include <vector>

#include "twopass/error.h"

namespace twopass {

std::vector<double> ShortestDistanceToFinal(const Wfst &a) {
  const StateId n = a.NumStates();
  std::vector<double> dist(n, kInfinity);
  std::vector<std::vector<std::pair<StateId, double>>> reverse(n);
  for (StateId s = 0; s < n; ++s)
    for (const Arc &arc : a.Arcs(s)) reverse[arc.next_state].emplace_back(s, arc.weight.Value());

  std::deque<StateId> queue;
  std::vector<char> in_queue(n, 0);
  for (StateId s = 0; s < n; ++s) {
    if (a.IsFinal(s)) {
      dist[s] = a.Final(s).Value();
      queue.push_back(s);
      in_queue[s] = 1;
    }
  }
  size_t relaxations = 0;
  const size_t limit = static_cast<size_t>(n) * (a.NumArcs() + 1) + 16;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    in_queue[s] = 0;
    for (const auto &[p, w] : reverse[s]) {
      double d = dist[s] + w;
      if (d < dist[p]) {
        if (++relaxations > limit) throw PreconditionError("negative-weight cycle");
        dist[p] = d;
        if (!in_queue[p]) {
          in_queue[p] = 1;
          queue.push_back(p);
        }
      }
    }
  }
  return dist;
}

// Best-first enumeration with the exact distance-to-final as heuristic; each
// state is expanded at most n times, which is sufficient for the n best
// paths.
std::vector<Path> ShortestPaths(const Wfst &a, size_t n) {
  std::vector<Path> result;
  if (n == 0 || a.Start() == kNoState) return result;
  const std::vector<double> to_final = ShortestDistanceToFinal(a);
  if (to_final[a.Start()] == kInfinity) return result;

  struct Node {
    StateId state;      // kNoState marks a completed path
    double cost;        // accumulated cost from the start
    int parent;         // index into nodes, -1 for the root
    Label ilabel;
    Label olabel;
  };
  std::vector<Node> nodes;
  using Entry = std::tuple<double, size_t, int>;  // priority, sequence, node index
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  size_t seq = 0;

  nodes.push_back({a.Start(), 0.0, -1, kEpsilon, kEpsilon});
  heap.emplace(to_final[a.Start()], seq++, 0);
  std::vector<size_t> pops(a.NumStates(), 0);

  while (!heap.empty() && result.size() < n) {
    auto [priority, order, index] = heap.top();
    heap.pop();
    Node node = nodes[index];
    if (node.state == kNoState) {
      Path path;
      path.weight = node.cost;
      for (int i = node.parent; i >= 0; i = nodes[i].parent) {
        if (nodes[i].ilabel != kEpsilon) path.ilabels.push_back(nodes[i].ilabel);
        if (nodes[i].olabel != kEpsilon) path.olabels.push_back(nodes[i].olabel);
      }
      std::reverse(path.ilabels.begin(), path.ilabels.end());
      std::reverse(path.olabels.begin(), path.olabels.end());
      result.push_back(std::move(path));
      continue;
    }
    if (++pops[node.state] > n) continue;
    if (a.IsFinal(node.state)) {
      double cost = node.cost + a.Final(node.state).Value();
      nodes.push_back({kNoState, cost, index, kEpsilon, kEpsilon});
      heap.emplace(cost, seq++, static_cast<int>(nodes.size() - 1));
    }
    for (const Arc &arc : a.Arcs(node.state)) {
      if (to_final[arc.next_state] == kInfinity) continue;
      double cost = node.cost + arc.weight.Value();
      nodes.push_back({arc.next_state, cost, index, arc.ilabel, arc.olabel});
      heap.emplace(cost + to_final[arc.next_state], seq++, static_cast<int>(nodes.size() - 1));
    }
  }
  return result;
}

}  // namespace twopass
