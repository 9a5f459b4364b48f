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

#ifndef TWOPASS_GRAPH_LEXICON_H_
#define TWOPASS_GRAPH_LEXICON_H_

#include <iosfwd>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "twopass/fst/symbol_table.h"

namespace twopass {

struct Pronunciation {
  std::string word;
  std::vector<std::string> units;
  double prob = 1.0;  // optional third column; cost is -ln(prob)
};

// Lexicon text: "word<TAB>unit unit ...[<TAB>prob]".
class Lexicon {
 public:
  static Lexicon Parse(std::istream &in);
  static Lexicon Read(const std::string &path);
  void Write(std::ostream &out) const;
  void Write(const std::string &path) const;

  void Add(Pronunciation pron);
  const std::vector<Pronunciation> &Entries() const { return entries_; }
  // Distinct words in first-appearance order.
  std::vector<std::string> Words() const;
  bool Contains(const std::string &word) const;

 private:
  std::vector<Pronunciation> entries_;
};

// CTC output inventory. Id 0 is the blank "<blk>"; ids 1.. are lexicon
// units, in file order. Ids equal posterior matrix columns.
class TokenInventory {
 public:
  static constexpr char kBlank[] = "<blk>";

  TokenInventory() : symbols_{kBlank}, index_{{kBlank, 0}} {}
  explicit TokenInventory(const std::vector<std::string> &units);
  static TokenInventory Parse(std::istream &in);  // one unit per line
  static TokenInventory Read(const std::string &path);
  void Write(std::ostream &out) const;
  void Write(const std::string &path) const;

  // Number of tokens, blank included.
  int Size() const { return static_cast<int>(symbols_.size()); }
  int NumUnits() const { return Size() - 1; }
  int Id(const std::string &unit) const;  // -1 if absent
  const std::string &Symbol(int id) const { return symbols_.at(id); }
  const std::vector<std::string> &Symbols() const { return symbols_; }

  // "<eps>"=0 and units at their token ids.
  std::shared_ptr<SymbolTable> UnitSymbols() const;
  // Input alphabet of the search graph: "<eps>"=0, "<blk>"=1 and unit id u
  // at u+1. Frame label = token id + 1.
  std::shared_ptr<SymbolTable> FrameLabelSymbols() const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

inline int FrameLabelToToken(Label l) { return l - 1; }
inline Label TokenToFrameLabel(int token) { return token + 1; }

}  // namespace twopass

#endif  // TWOPASS_GRAPH_LEXICON_H_
