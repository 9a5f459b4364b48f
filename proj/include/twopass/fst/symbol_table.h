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

#ifndef TWOPASS_FST_SYMBOL_TABLE_H_
#define TWOPASS_FST_SYMBOL_TABLE_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace twopass {

using Label = int32_t;
constexpr Label kEpsilon = 0;
constexpr Label kNoLabel = -1;

// Bijective map between dense integer ids and text symbols. Id 0 is always
// "<eps>".
class SymbolTable {
 public:
  static constexpr std::string_view kEpsilonSymbol = "<eps>";

  SymbolTable();

  // Returns the id of `symbol`, adding it with the next free id if new.
  Label AddSymbol(std::string_view symbol);
  // Adds `symbol` at an explicit id. Throws FormatError on conflicts.
  void AddSymbol(std::string_view symbol, Label id);

  Label Find(std::string_view symbol) const;  // kNoLabel when absent
  const std::string &Find(Label id) const;    // throws on unknown id
  bool Contains(Label id) const;
  bool Contains(std::string_view symbol) const { return Find(symbol) != kNoLabel; }

  // One past the largest id.
  Label AvailableKey() const { return static_cast<Label>(symbols_.size()); }
  size_t Size() const { return index_.size(); }

  static SymbolTable ReadText(std::istream &in);
  static SymbolTable ReadText(const std::string &path);
  void WriteText(std::ostream &out) const;
  void WriteText(const std::string &path) const;

  friend bool operator==(const SymbolTable &a, const SymbolTable &b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<std::string> symbols_;  // empty string marks an unused id
  std::unordered_map<std::string, Label> index_;
};

}  // namespace twopass

#endif  // TWOPASS_FST_SYMBOL_TABLE_H_
