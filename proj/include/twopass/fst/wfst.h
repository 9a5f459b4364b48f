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

#ifndef TWOPASS_FST_WFST_H_
#define TWOPASS_FST_WFST_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "twopass/fst/symbol_table.h"
#include "twopass/fst/weight.h"

namespace twopass {

using StateId = int32_t;
constexpr StateId kNoState = -1;

struct Arc {
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  TropicalWeight weight;
  StateId next_state = kNoState;

  Arc() = default;
  Arc(Label i, Label o, TropicalWeight w, StateId n)
      : ilabel(i), olabel(o), weight(w), next_state(n) {}
  Arc(Label i, Label o, double w, StateId n)
      : ilabel(i), olabel(o), weight(w), next_state(n) {}
};

enum class ArcSortType { kInput, kOutput };

// Mutable weighted transducer over the tropical semiring. State ids are
// dense; arcs are stored contiguously per state. A machine with no states
// (start == kNoState) accepts the empty language.
//
// Once built, a Wfst is only read; concurrent readers are safe.
class Wfst {
 public:
  Wfst() = default;

  StateId AddState();
  void AddArc(StateId src, const Arc &arc);
  void SetStart(StateId s);
  void SetFinal(StateId s, TropicalWeight w);
  void SetFinal(StateId s, double w) { SetFinal(s, TropicalWeight(w)); }
  void ReserveStates(size_t n) { states_.reserve(n); }

  StateId Start() const { return start_; }
  StateId NumStates() const { return static_cast<StateId>(states_.size()); }
  size_t NumArcs() const;
  size_t NumArcs(StateId s) const { return states_[s].arcs.size(); }
  TropicalWeight Final(StateId s) const { return states_[s].final; }
  bool IsFinal(StateId s) const { return !states_[s].final.IsZero(); }
  std::span<const Arc> Arcs(StateId s) const { return states_[s].arcs; }
  std::vector<Arc> &MutableArcs(StateId s) { return states_[s].arcs; }

  // Clears everything except symbol tables.
  void DeleteStates();

  const std::shared_ptr<const SymbolTable> &InputSymbols() const { return isymbols_; }
  const std::shared_ptr<const SymbolTable> &OutputSymbols() const { return osymbols_; }
  void SetInputSymbols(std::shared_ptr<const SymbolTable> syms) { isymbols_ = std::move(syms); }
  void SetOutputSymbols(std::shared_ptr<const SymbolTable> syms) { osymbols_ = std::move(syms); }

  bool IsArcSorted(ArcSortType type) const;
  // True when no state has two arcs with the same (ilabel, olabel) pair and
  // there are no epsilon:epsilon arcs.
  bool IsPairDeterministic() const;
  // True when no state has two arcs with the same ilabel and no input
  // epsilons.
  bool IsInputDeterministic() const;
  bool HasEpsilonArcs() const;  // any arc with ilabel == olabel == 0

  // Throws PreconditionError when arcs or finals reference invalid states.
  void Validate() const;

 private:
  struct State {
    std::vector<Arc> arcs;
    TropicalWeight final = TropicalWeight::Zero();
  };
  std::vector<State> states_;
  StateId start_ = kNoState;
  std::shared_ptr<const SymbolTable> isymbols_;
  std::shared_ptr<const SymbolTable> osymbols_;
};

}  // namespace twopass

#endif  // TWOPASS_FST_WFST_H_
