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

#include "twopass/eval/nbest_io.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "twopass/error.h"
#include "twopass/rescore/sequence_scorer.h"
#include "twopass/text.h"

namespace twopass {
namespace {

double ParseNumber(const std::string &field, int line_no) {
  try {
    size_t used = 0;
    double v = std::stod(field, &used);
    if (used == field.size()) return v;
  } catch (const std::exception &) {
  }
  throw FormatError("n-best line " + std::to_string(line_no) + ": expected a number, got '" +
                    field + "'");
}

}  // namespace

void WriteNbestRecord(std::ostream &out, const NbestRecord &r) {
  auto old = out.precision(10);
  out << r.utt << ' ' << r.rank << ' ' << r.graph_cost << ' ' << r.acoustic_cost;
  for (const std::string &w : r.words) out << ' ' << w;
  if (r.rescore) out << ' ' << *r.rescore << ' ' << r.final_score.value_or(0.0);
  out << '\n';
  out.precision(old);
}

std::vector<NbestRecord> ReadNbestRecords(std::istream &in, bool rescored) {
  std::vector<NbestRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> f = SplitFields(line);
    if (f.empty()) continue;
    size_t min_fields = rescored ? 6 : 4;
    if (f.size() < min_fields) {
      throw FormatError("n-best line " + std::to_string(line_no) + ": expected at least " +
                        std::to_string(min_fields) + " fields");
    }
    NbestRecord r;
    r.utt = f[0];
    r.rank = static_cast<int>(ParseNumber(f[1], line_no));
    r.graph_cost = ParseNumber(f[2], line_no);
    r.acoustic_cost = ParseNumber(f[3], line_no);
    size_t words_end = rescored ? f.size() - 2 : f.size();
    r.words.assign(f.begin() + 4, f.begin() + words_end);
    if (rescored) {
      r.rescore = ParseNumber(f[f.size() - 2], line_no);
      r.final_score = ParseNumber(f[f.size() - 1], line_no);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<NbestRecord> ReadNbestRecords(const std::string &path, bool rescored) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ReadNbestRecords(in, rescored);
}

std::vector<std::string> WordStrings(const std::vector<Label> &words, const SymbolTable &table) {
  std::vector<std::string> out;
  for (Label w : words) out.push_back(table.Find(w));
  return out;
}

std::vector<NbestRecord> ToRecords(const std::string &utt, const NBestList &nbest,
                                   const SymbolTable &words) {
  std::vector<NbestRecord> out;
  for (size_t i = 0; i < nbest.size(); ++i) {
    NbestRecord r;
    r.utt = utt;
    r.rank = static_cast<int>(i) + 1;
    r.graph_cost = nbest[i].graph_cost;
    r.acoustic_cost = nbest[i].acoustic_cost;
    r.words = WordStrings(nbest[i].words, words);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<NbestRecord> ToRecords(const std::string &utt, const RescoreResult &result,
                                   const SymbolTable &words) {
  std::vector<NbestRecord> out;
  for (size_t i = 0; i < result.ranked.size(); ++i) {
    const FusedHypothesis &h = result.ranked[i];
    NbestRecord r;
    r.utt = utt;
    r.rank = static_cast<int>(i) + 1;
    r.graph_cost = h.graph_cost;
    r.acoustic_cost = h.acoustic_cost;
    r.words = WordStrings(h.words, words);
    r.rescore = h.rescore;
    r.final_score = h.final_score;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<NbestRecord>>> GroupByUtterance(
    const std::vector<NbestRecord> &records) {
  std::vector<std::pair<std::string, std::vector<NbestRecord>>> out;
  for (const NbestRecord &r : records) {
    if (out.empty() || out.back().first != r.utt) out.emplace_back(r.utt, std::vector<NbestRecord>{});
    out.back().second.push_back(r);
  }
  return out;
}

NBestList RecordsToNbest(const std::vector<NbestRecord> &records, SymbolTable *words,
                         const TokenInventory &inventory) {
  NBestList out;
  for (const NbestRecord &r : records) {
    Hypothesis h;
    for (const std::string &w : r.words) h.words.push_back(words->AddSymbol(w));
    h.units = WordsToUnits(r.words, inventory);
    h.graph_cost = r.graph_cost;
    h.acoustic_cost = r.acoustic_cost;
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> ReadReferences(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (StripWhitespace(line).empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      out.emplace_back(line, "");
    } else {
      out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
  }
  return out;
}

void WriteReferences(const std::vector<std::pair<std::string, std::string>> &refs,
                     const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto &[utt, text] : refs) out << utt << '\t' << text << '\n';
}

}  // namespace twopass
