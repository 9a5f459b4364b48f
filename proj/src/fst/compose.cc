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

#include "twopass/fst/compose.h"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <tuple>
#include <unordered_map>

#include "twopass/error.h"
#include "twopass/fst/connect.h"

namespace twopass {
namespace {

struct Triple {
  StateId s1;
  StateId s2;
  int8_t filter;
  bool operator==(const Triple &) const = default;
};

struct TripleHash {
  size_t operator()(const Triple &t) const {
    uint64_t h = static_cast<uint32_t>(t.s1);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<uint32_t>(t.s2);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<uint8_t>(t.filter);
    return static_cast<size_t>(h ^ (h >> 29));
  }
};

class Composer {
 public:
  Composer(const Wfst &a, const Wfst &b) : a_(a), b_(b) {}

  Wfst Run() {
    Wfst out;
    if (a_.Start() == kNoState || b_.Start() == kNoState) return out;
    out_ = &out;
    out.SetStart(FindState({a_.Start(), b_.Start(), 0}));
    while (!queue_.empty()) {
      StateId id = queue_.front();
      queue_.pop_front();
      Expand(id, tuples_[id]);
    }
    return out;
  }

 private:
  StateId FindState(const Triple &t) {
    auto [it, inserted] = ids_.emplace(t, static_cast<StateId>(tuples_.size()));
    if (inserted) {
      tuples_.push_back(t);
      StateId s = out_->AddState();
      TropicalWeight f = Times(a_.Final(t.s1), b_.Final(t.s2));
      if (!f.IsZero()) out_->SetFinal(s, f);
      queue_.push_back(s);
    }
    return it->second;
  }

  void Expand(StateId id, Triple t) {
    auto b_arcs = b_.Arcs(t.s2);
    auto by_ilabel = [](const Arc &arc, Label l) { return arc.ilabel < l; };
    for (const Arc &a1 : a_.Arcs(t.s1)) {
      if (a1.olabel != kEpsilon) {
        auto it = std::lower_bound(b_arcs.begin(), b_arcs.end(), a1.olabel, by_ilabel);
        for (; it != b_arcs.end() && it->ilabel == a1.olabel; ++it)
          Emit(id, a1, *it, {a1.next_state, it->next_state, 0});
      } else {
        // a moves alone on an output epsilon.
        if (t.filter != 2) {
          Arc stay(kEpsilon, kEpsilon, TropicalWeight::One(), t.s2);
          Emit(id, a1, stay, {a1.next_state, t.s2, 1});
        }
        // Both move on epsilon simultaneously.
        if (t.filter == 0) {
          auto it = std::lower_bound(b_arcs.begin(), b_arcs.end(), kEpsilon, by_ilabel);
          for (; it != b_arcs.end() && it->ilabel == kEpsilon; ++it)
            Emit(id, a1, *it, {a1.next_state, it->next_state, 0});
        }
      }
    }
    // b moves alone on an input epsilon.
    if (t.filter != 1) {
      Arc stay(kEpsilon, kEpsilon, TropicalWeight::One(), t.s1);
      auto it = std::lower_bound(b_arcs.begin(), b_arcs.end(), kEpsilon, by_ilabel);
      for (; it != b_arcs.end() && it->ilabel == kEpsilon; ++it)
        Emit(id, stay, *it, {t.s1, it->next_state, 2});
    }
  }

  void Emit(StateId src, const Arc &a1, const Arc &a2, const Triple &dest) {
    StateId next = FindState(dest);
    out_->AddArc(src, Arc(a1.ilabel, a2.olabel, Times(a1.weight, a2.weight), next));
  }

  const Wfst &a_;
  const Wfst &b_;
  Wfst *out_ = nullptr;
  std::unordered_map<Triple, StateId, TripleHash> ids_;
  std::vector<Triple> tuples_;
  std::deque<StateId> queue_;
};

}  // namespace

Wfst Compose(const Wfst &a, const Wfst &b, const ComposeOptions &opts) {
  if (a.OutputSymbols() && b.InputSymbols() && !(*a.OutputSymbols() == *b.InputSymbols()))
    throw ConfigError(
        "compose: output symbols of the left machine differ from input symbols of the right machine");
  Wfst sorted;
  const Wfst *rhs = &b;
  if (!b.IsArcSorted(ArcSortType::kInput)) {
    sorted = ArcSort(b, ArcSortType::kInput);
    rhs = &sorted;
  }
  Wfst out = Composer(a, *rhs).Run();
  if (opts.connect) out = Trim(out);
  out.SetInputSymbols(a.InputSymbols());
  out.SetOutputSymbols(b.OutputSymbols());
  return out;
}

}  // namespace twopass
