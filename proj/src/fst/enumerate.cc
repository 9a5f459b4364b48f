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

#include "twopass/fst/enumerate.h"

#include <cmath>
#include <cstdint>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "twopass/error.h"

namespace twopass {
namespace {

// Prefix tree of label strings; node 0 is the empty string.
class StringTrie {
 public:
  StringTrie() : nodes_{{-1, kEpsilon, 0}} {}

  int Append(int node, Label label) {
    uint64_t key = (static_cast<uint64_t>(static_cast<uint32_t>(node)) << 32) |
                   static_cast<uint32_t>(label);
    auto [it, inserted] = children_.emplace(key, static_cast<int>(nodes_.size()));
    if (inserted) nodes_.push_back({node, label, nodes_[node].length + 1});
    return it->second;
  }
  size_t Length(int node) const { return nodes_[node].length; }
  std::vector<Label> Get(int node) const {
    std::vector<Label> out(nodes_[node].length);
    for (int i = node; i > 0; i = nodes_[i].parent) out[nodes_[i].length - 1] = nodes_[i].label;
    return out;
  }

 private:
  struct Node {
    int parent;
    Label label;
    size_t length;
  };
  std::vector<Node> nodes_;
  std::unordered_map<uint64_t, int> children_;
};

struct Config {
  StateId state;
  int in;
  int out;
  bool operator==(const Config &) const = default;
};

struct ConfigHash {
  size_t operator()(const Config &c) const {
    uint64_t h = static_cast<uint32_t>(c.state);
    h = h * 0x100000001B3ULL ^ static_cast<uint32_t>(c.in);
    h = h * 0x100000001B3ULL ^ static_cast<uint32_t>(c.out);
    return static_cast<size_t>(h * 0x9E3779B97F4A7C15ULL);
  }
};

}  // namespace

WeightedLanguage PathEnumerate(const Wfst &a, size_t max_len) {
  WeightedLanguage result;
  if (a.Start() == kNoState) return result;
  StringTrie trie;
  std::unordered_map<Config, double, ConfigHash> best;
  std::deque<Config> queue;
  std::unordered_map<Config, char, ConfigHash> queued;

  Config init{a.Start(), 0, 0};
  best[init] = 0.0;
  queue.push_back(init);
  queued[init] = 1;
  size_t relaxations = 0;
  while (!queue.empty()) {
    Config c = queue.front();
    queue.pop_front();
    queued[c] = 0;
    const double w = best[c];
    for (const Arc &arc : a.Arcs(c.state)) {
      Config next{arc.next_state, c.in, c.out};
      if (arc.ilabel != kEpsilon) {
        if (trie.Length(c.in) >= max_len) continue;
        next.in = trie.Append(c.in, arc.ilabel);
      }
      if (arc.olabel != kEpsilon) {
        if (trie.Length(c.out) >= max_len) continue;
        next.out = trie.Append(c.out, arc.olabel);
      }
      double nw = w + arc.weight.Value();
      auto it = best.find(next);
      if (it == best.end() || nw < it->second) {
        if (++relaxations > 50000000) throw PreconditionError("path enumeration does not converge");
        best[next] = nw;
        char &q = queued[next];
        if (!q) {
          q = 1;
          queue.push_back(next);
        }
      }
    }
  }
  for (const auto &[c, w] : best) {
    if (!a.IsFinal(c.state)) continue;
    double total = w + a.Final(c.state).Value();
    PathKey key{trie.Get(c.in), trie.Get(c.out)};
    auto [it, inserted] = result.emplace(std::move(key), total);
    if (!inserted && total < it->second) it->second = total;
  }
  return result;
}

std::map<std::vector<Label>, double> PathEnumerateInput(const Wfst &a, size_t max_len) {
  std::map<std::vector<Label>, double> result;
  for (const auto &[key, w] : PathEnumerate(a, max_len)) {
    auto [it, inserted] = result.emplace(key.input, w);
    if (!inserted && w < it->second) it->second = w;
  }
  return result;
}

namespace {

std::string Describe(const PathKey &key) {
  std::ostringstream out;
  out << '[';
  for (Label l : key.input) out << ' ' << l;
  out << " ] -> [";
  for (Label l : key.output) out << ' ' << l;
  out << " ]";
  return out.str();
}

}  // namespace

bool LanguagesEqual(const WeightedLanguage &a, const WeightedLanguage &b, double tol,
                    std::string *diff) {
  auto fail = [&](const std::string &msg) {
    if (diff) *diff = msg;
    return false;
  };
  for (const auto &[key, w] : a) {
    auto it = b.find(key);
    if (it == b.end()) return fail("only in first: " + Describe(key) + " w=" + std::to_string(w));
    if (std::abs(it->second - w) > tol)
      return fail("weight mismatch at " + Describe(key) + ": " + std::to_string(w) + " vs " +
                  std::to_string(it->second));
  }
  for (const auto &[key, w] : b)
    if (!a.count(key)) return fail("only in second: " + Describe(key) + " w=" + std::to_string(w));
  return true;
}

}  // namespace twopass
