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

#include "twopass/fst/symbol_table.h"

#include <fstream>
#include <sstream>

#include "twopass/error.h"

namespace twopass {

SymbolTable::SymbolTable() { AddSymbol(kEpsilonSymbol, kEpsilon); }

Label SymbolTable::AddSymbol(std::string_view symbol) {
  auto it = index_.find(std::string(symbol));
  if (it != index_.end()) return it->second;
  Label id = AvailableKey();
  AddSymbol(symbol, id);
  return id;
}

void SymbolTable::AddSymbol(std::string_view symbol, Label id) {
  if (id < 0) throw FormatError("negative symbol id for '" + std::string(symbol) + "'");
  if (symbol.empty()) throw FormatError("empty symbol");
  if (id == kEpsilon && symbol != kEpsilonSymbol)
    throw FormatError("id 0 is reserved for <eps>, got '" + std::string(symbol) + "'");
  auto it = index_.find(std::string(symbol));
  if (it != index_.end()) {
    if (it->second == id) return;
    throw FormatError("symbol '" + std::string(symbol) + "' already has id " +
                      std::to_string(it->second));
  }
  if (static_cast<size_t>(id) < symbols_.size() && !symbols_[id].empty())
    throw FormatError("id " + std::to_string(id) + " already bound to '" + symbols_[id] + "'");
  if (static_cast<size_t>(id) >= symbols_.size()) symbols_.resize(id + 1);
  symbols_[id] = std::string(symbol);
  index_.emplace(symbols_[id], id);
}

Label SymbolTable::Find(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  return it == index_.end() ? kNoLabel : it->second;
}

const std::string &SymbolTable::Find(Label id) const {
  if (!Contains(id)) throw ConfigError("unknown symbol id " + std::to_string(id));
  return symbols_[id];
}

bool SymbolTable::Contains(Label id) const {
  return id >= 0 && static_cast<size_t>(id) < symbols_.size() && !symbols_[id].empty();
}

SymbolTable SymbolTable::ReadText(std::istream &in) {
  SymbolTable table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string symbol;
    long long id;
    if (!(fields >> symbol >> id))
      throw FormatError("symbol table line " + std::to_string(lineno) + ": expected 'symbol<TAB>id'");
    table.AddSymbol(symbol, static_cast<Label>(id));
  }
  return table;
}

SymbolTable SymbolTable::ReadText(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open symbol table " + path);
  return ReadText(in);
}

void SymbolTable::WriteText(std::ostream &out) const {
  for (size_t id = 0; id < symbols_.size(); ++id)
    if (!symbols_[id].empty()) out << symbols_[id] << '\t' << id << '\n';
}

void SymbolTable::WriteText(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write symbol table " + path);
  WriteText(out);
}

}  // namespace twopass
