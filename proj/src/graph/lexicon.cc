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

#include "twopass/graph/lexicon.h"

#include <fstream>
#include <set>
#include <sstream>

#include "twopass/error.h"

namespace twopass {
namespace {

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

Lexicon Lexicon::Parse(std::istream &in) {
  Lexicon lex;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto cols = SplitTabs(line);
    if (cols.size() < 2 || cols.size() > 3)
      throw FormatError("lexicon line " + std::to_string(lineno) + ": expected 'word<TAB>units[<TAB>prob]'");
    Pronunciation pron;
    pron.word = cols[0];
    std::istringstream units(cols[1]);
    for (std::string u; units >> u;) pron.units.push_back(u);
    if (cols.size() == 3) {
      try {
        pron.prob = std::stod(cols[2]);
      } catch (const std::logic_error &) {
        throw FormatError("lexicon line " + std::to_string(lineno) + ": bad probability '" + cols[2] + "'");
      }
    }
    try {
      lex.Add(std::move(pron));
    } catch (const FormatError &e) {
      throw FormatError("lexicon line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return lex;
}

Lexicon Lexicon::Read(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon " + path);
  return Parse(in);
}

void Lexicon::Write(std::ostream &out) const {
  for (const auto &p : entries_) {
    out << p.word << '\t';
    for (size_t i = 0; i < p.units.size(); ++i) out << (i ? " " : "") << p.units[i];
    if (p.prob != 1.0) out << '\t' << p.prob;
    out << '\n';
  }
}

void Lexicon::Write(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write lexicon " + path);
  Write(out);
}

void Lexicon::Add(Pronunciation pron) {
  if (pron.word.empty()) throw FormatError("empty word");
  if (pron.units.empty()) throw FormatError("word '" + pron.word + "' has an empty unit sequence");
  if (!(pron.prob > 0.0 && pron.prob <= 1.0))
    throw FormatError("pronunciation probability of '" + pron.word + "' must be in (0, 1]");
  entries_.push_back(std::move(pron));
}

std::vector<std::string> Lexicon::Words() const {
  std::vector<std::string> words;
  std::set<std::string> seen;
  for (const auto &p : entries_)
    if (seen.insert(p.word).second) words.push_back(p.word);
  return words;
}

bool Lexicon::Contains(const std::string &word) const {
  for (const auto &p : entries_)
    if (p.word == word) return true;
  return false;
}

TokenInventory::TokenInventory(const std::vector<std::string> &units) : TokenInventory() {
  for (const auto &u : units) {
    if (u == kBlank) throw FormatError("unit inventory must not list <blk>; it is implicit at id 0");
    if (u.empty()) throw FormatError("empty unit symbol");
    if (!index_.emplace(u, static_cast<int>(symbols_.size())).second)
      throw FormatError("duplicate unit '" + u + "'");
    symbols_.push_back(u);
  }
}

TokenInventory TokenInventory::Parse(std::istream &in) {
  std::vector<std::string> units;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string u;
    if (fields >> u) units.push_back(u);
  }
  return TokenInventory(units);
}

TokenInventory TokenInventory::Read(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open unit inventory " + path);
  return Parse(in);
}

void TokenInventory::Write(std::ostream &out) const {
  for (size_t i = 1; i < symbols_.size(); ++i) out << symbols_[i] << '\n';
}

void TokenInventory::Write(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write unit inventory " + path);
  Write(out);
}

int TokenInventory::Id(const std::string &unit) const {
  auto it = index_.find(unit);
  return it == index_.end() ? -1 : it->second;
}

std::shared_ptr<SymbolTable> TokenInventory::UnitSymbols() const {
  auto table = std::make_shared<SymbolTable>();
  for (size_t i = 1; i < symbols_.size(); ++i) table->AddSymbol(symbols_[i], static_cast<Label>(i));
  return table;
}

std::shared_ptr<SymbolTable> TokenInventory::FrameLabelSymbols() const {
  auto table = std::make_shared<SymbolTable>();
  for (size_t i = 0; i < symbols_.size(); ++i)
    table->AddSymbol(symbols_[i], TokenToFrameLabel(static_cast<int>(i)));
  return table;
}

}  // namespace twopass
