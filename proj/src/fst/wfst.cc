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

#include "twopass/fst/wfst.h"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "twopass/error.h"

namespace twopass {

StateId Wfst::AddState() {
  states_.emplace_back();
  return static_cast<StateId>(states_.size() - 1);
}

void Wfst::AddArc(StateId src, const Arc &arc) { states_[src].arcs.push_back(arc); }

void Wfst::SetStart(StateId s) { start_ = s; }

void Wfst::SetFinal(StateId s, TropicalWeight w) { states_[s].final = w; }

size_t Wfst::NumArcs() const {
  size_t n = 0;
  for (const auto &s : states_) n += s.arcs.size();
  return n;
}

void Wfst::DeleteStates() {
  states_.clear();
  start_ = kNoState;
}

bool Wfst::IsArcSorted(ArcSortType type) const {
  for (const auto &s : states_) {
    for (size_t i = 1; i < s.arcs.size(); ++i) {
      Label prev = type == ArcSortType::kInput ? s.arcs[i - 1].ilabel : s.arcs[i - 1].olabel;
      Label cur = type == ArcSortType::kInput ? s.arcs[i].ilabel : s.arcs[i].olabel;
      if (cur < prev) return false;
    }
  }
  return true;
}

bool Wfst::IsPairDeterministic() const {
  for (const auto &s : states_) {
    std::set<std::pair<Label, Label>> seen;
    for (const auto &arc : s.arcs) {
      if (arc.ilabel == kEpsilon && arc.olabel == kEpsilon) return false;
      if (!seen.emplace(arc.ilabel, arc.olabel).second) return false;
    }
  }
  return true;
}

bool Wfst::IsInputDeterministic() const {
  for (const auto &s : states_) {
    std::set<Label> seen;
    for (const auto &arc : s.arcs) {
      if (arc.ilabel == kEpsilon) return false;
      if (!seen.insert(arc.ilabel).second) return false;
    }
  }
  return true;
}

bool Wfst::HasEpsilonArcs() const {
  for (const auto &s : states_)
    for (const auto &arc : s.arcs)
      if (arc.ilabel == kEpsilon && arc.olabel == kEpsilon) return true;
  return false;
}

void Wfst::Validate() const {
  const StateId n = NumStates();
  if (n == 0) {
    if (start_ != kNoState) throw PreconditionError("start state set on an empty machine");
    return;
  }
  if (start_ < 0 || start_ >= n)
    throw PreconditionError("invalid start state " + std::to_string(start_));
  for (StateId s = 0; s < n; ++s) {
    for (const auto &arc : states_[s].arcs) {
      if (arc.next_state < 0 || arc.next_state >= n)
        throw PreconditionError("arc from state " + std::to_string(s) + " to invalid state " +
                                std::to_string(arc.next_state));
      if (arc.ilabel < 0 || arc.olabel < 0)
        throw PreconditionError("negative label on arc from state " + std::to_string(s));
    }
  }
}

}  // namespace twopass
