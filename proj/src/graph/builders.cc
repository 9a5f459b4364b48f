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

#include "twopass/graph/builders.h"

#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "twopass/error.h"
#include "twopass/fst/compose.h"
#include "twopass/fst/connect.h"
#include "twopass/fst/determinize.h"
#include "twopass/fst/minimize.h"
#include "twopass/log.h"

namespace twopass {
namespace {

void Warn(std::vector<std::string> *sink, const std::string &msg) {
  LogWarning(msg);
  if (sink) sink->push_back(msg);
}

double ToCost(double log10_value) { return -log10_value * kLn10; }

}  // namespace

Wfst BuildGrammar(const ArpaModel &arpa, std::shared_ptr<const SymbolTable> words,
                  Label backoff_label, std::vector<std::string> *warnings) {
  using Words = ArpaModel::Words;
  Wfst g;
  g.SetInputSymbols(words);
  g.SetOutputSymbols(words);

  std::map<Words, StateId> contexts;
  contexts[{}] = g.AddState();
  for (const auto &[ngram, entry] : arpa.Entries()) {
    if (static_cast<int>(ngram.size()) < arpa.MaxOrder() && ngram.back() != kSentenceEnd)
      contexts.emplace(ngram, g.AddState());
  }
  auto longest_suffix_context = [&](Words w) {
    while (!contexts.count(w)) w.erase(w.begin());
    return contexts.at(w);
  };

  auto start = contexts.find({kSentenceStart});
  g.SetStart(start != contexts.end() ? start->second : contexts.at({}));

  std::set<std::string> skipped;
  for (const auto &[ngram, entry] : arpa.Entries()) {
    const std::string &word = ngram.back();
    if (word == kSentenceStart) continue;
    Words history(ngram.begin(), ngram.end() - 1);
    auto src = contexts.find(history);
    if (src == contexts.end()) continue;
    if (word == kSentenceEnd) {
      g.SetFinal(src->second, ToCost(entry.log10_prob));
      continue;
    }
    Label id = words->Find(word);
    if (id == kNoLabel) {
      if (skipped.insert(word).second)
        Warn(warnings, "grammar: LM word '" + word + "' is not in the word table; dropped");
      continue;
    }
    StateId dest = longest_suffix_context(ngram.size() < static_cast<size_t>(arpa.MaxOrder())
                                              ? ngram
                                              : Words(ngram.begin() + 1, ngram.end()));
    g.AddArc(src->second, Arc(id, id, ToCost(entry.log10_prob), dest));
  }
  for (const auto &[ctx, state] : contexts) {
    if (ctx.empty()) continue;
    const NgramEntry *entry = arpa.Find(ctx);
    double backoff = entry && entry->log10_backoff ? *entry->log10_backoff : 0.0;
    StateId dest = longest_suffix_context(Words(ctx.begin() + 1, ctx.end()));
    g.AddArc(state, Arc(backoff_label, backoff_label, ToCost(backoff), dest));
  }
  Wfst trimmed = Trim(g);
  ArcSortInPlace(&trimmed, ArcSortType::kInput);
  return trimmed;
}

Wfst BuildGrammar(const ArpaModel &arpa) {
  auto words = std::make_shared<SymbolTable>();
  for (const auto &w : arpa.Vocabulary())
    if (w != kSentenceStart && w != kSentenceEnd) words->AddSymbol(w);
  return BuildGrammar(arpa, words);
}

LexiconGraph BuildLexicon(const Lexicon &lex, const TokenInventory &inventory,
                          const LexiconOptions &opts, std::shared_ptr<SymbolTable> word_symbols) {
  LexiconGraph out;
  out.unit_symbols = inventory.UnitSymbols();
  out.word_symbols = word_symbols ? std::move(word_symbols) : std::make_shared<SymbolTable>();
  for (const auto &w : lex.Words()) out.word_symbols->AddSymbol(w);

  const auto &entries = lex.Entries();
  std::vector<std::vector<Label>> spellings(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    for (const auto &u : entries[i].units) {
      int id = inventory.Id(u);
      if (id <= 0)
        throw ConfigError("lexicon: unknown unit '" + u + "' in word '" + entries[i].word + "'");
      spellings[i].push_back(id);
    }
  }

  // Disambiguation markers for homophones and for spellings that are a
  // proper prefix of another spelling.
  std::vector<int> marker(entries.size(), 0);
  int max_marker = 0;
  if (opts.disambiguate) {
    std::map<std::vector<Label>, std::vector<size_t>> groups;
    std::set<std::vector<Label>> proper_prefixes;
    for (size_t i = 0; i < entries.size(); ++i) {
      groups[spellings[i]].push_back(i);
      for (size_t k = 1; k < spellings[i].size(); ++k)
        proper_prefixes.emplace(spellings[i].begin(), spellings[i].begin() + k);
    }
    for (const auto &[spelling, members] : groups) {
      if (members.size() < 2 && !proper_prefixes.count(spelling)) continue;
      for (size_t k = 0; k < members.size(); ++k) {
        marker[members[k]] = static_cast<int>(k) + 1;
        max_marker = std::max(max_marker, marker[members[k]]);
      }
    }
  }
  if (opts.backoff_loop) {
    out.backoff_unit = out.unit_symbols->AddSymbol("#0");
    out.backoff_word = out.word_symbols->AddSymbol("#0");
    out.disambig_units.push_back(out.backoff_unit);
  }
  std::vector<Label> marker_ids(max_marker + 1, kNoLabel);
  for (int k = 1; k <= max_marker; ++k) {
    marker_ids[k] = out.unit_symbols->AddSymbol("#" + std::to_string(k));
    out.disambig_units.push_back(marker_ids[k]);
  }

  Wfst &l = out.fst;
  StateId loop = l.AddState();
  l.SetStart(loop);
  l.SetFinal(loop, TropicalWeight::One());
  for (size_t i = 0; i < entries.size(); ++i) {
    std::vector<Label> labels = spellings[i];
    if (marker[i]) labels.push_back(marker_ids[marker[i]]);
    Label word = out.word_symbols->Find(entries[i].word);
    double cost = -std::log(entries[i].prob);
    StateId cur = loop;
    for (size_t k = 0; k < labels.size(); ++k) {
      bool last = k + 1 == labels.size();
      StateId next = last ? loop : l.AddState();
      l.AddArc(cur, Arc(labels[k], last ? word : kEpsilon, k == 0 ? cost : 0.0, next));
      cur = next;
    }
  }
  if (opts.backoff_loop) l.AddArc(loop, Arc(out.backoff_unit, out.backoff_word, 0.0, loop));
  l.SetInputSymbols(out.unit_symbols);
  l.SetOutputSymbols(out.word_symbols);
  ArcSortInPlace(&l, ArcSortType::kOutput);
  return out;
}

Wfst BuildToken(const TokenInventory &inventory, const std::vector<Label> &passthrough) {
  Wfst t;
  const int num_tokens = inventory.Size();
  const Label blank = TokenToFrameLabel(0);
  // State 0 plus one state per unit; unit u lives at state u.
  for (int s = 0; s < num_tokens; ++s) {
    t.AddState();
    t.SetFinal(s, TropicalWeight::One());
  }
  t.SetStart(0);
  t.AddArc(0, Arc(blank, kEpsilon, 0.0, 0));
  for (int u = 1; u < num_tokens; ++u) t.AddArc(0, Arc(TokenToFrameLabel(u), u, 0.0, u));
  for (int u = 1; u < num_tokens; ++u) {
    t.AddArc(u, Arc(blank, kEpsilon, 0.0, 0));
    for (int v = 1; v < num_tokens; ++v) {
      if (v == u)
        t.AddArc(u, Arc(TokenToFrameLabel(u), kEpsilon, 0.0, u));
      else
        t.AddArc(u, Arc(TokenToFrameLabel(v), v, 0.0, v));
    }
  }
  for (int s = 0; s < num_tokens; ++s)
    for (Label l : passthrough) t.AddArc(s, Arc(l, l, 0.0, s));
  t.SetInputSymbols(inventory.FrameLabelSymbols());
  t.SetOutputSymbols(inventory.UnitSymbols());
  ArcSortInPlace(&t, ArcSortType::kOutput);
  return t;
}

namespace {

// Lexicon restricted to words the LM knows, with warnings for both sides.
Lexicon FilterLexicon(const ArpaModel &arpa, const Lexicon &lex, std::vector<std::string> *warnings) {
  Lexicon filtered;
  std::set<std::string> dropped;
  for (const auto &p : lex.Entries()) {
    if (!arpa.Find({p.word})) {
      if (dropped.insert(p.word).second)
        Warn(warnings, "lexicon word '" + p.word + "' is not in the LM; dropped");
      continue;
    }
    filtered.Add(p);
  }
  for (const auto &w : arpa.Vocabulary()) {
    if (w == kSentenceStart || w == kSentenceEnd || lex.Contains(w)) continue;
    if (w == kUnknownWord)
      Warn(warnings, "LM defines <unk> but the lexicon does not; <unk> dropped");
    else
      Warn(warnings, "LM word '" + w + "' has no pronunciation; dropped");
  }
  return filtered;
}

}  // namespace

SearchGraph BuildSearchGraph(const ArpaModel &arpa, const Lexicon &lex,
                             const TokenInventory &inventory, const GraphOptions &opts) {
  SearchGraph out;
  Lexicon filtered = FilterLexicon(arpa, lex, &out.warnings);
  LexiconGraph l = BuildLexicon(filtered, inventory, {.disambiguate = true, .backoff_loop = true});
  std::vector<std::string> ignored;
  Wfst g = BuildGrammar(arpa, l.word_symbols, l.backoff_word, &ignored);

  Wfst lg = Compose(l.fst, g);
  out.lg_states = lg.NumStates();
  Wfst det = Determinize(lg, {.max_states = opts.max_determinize_states});
  out.det_states = det.NumStates();
  Wfst min = Minimize(det);
  out.min_states = min.NumStates();

  Wfst stripped = RelabelToEpsilon(min, l.disambig_units, true, false);
  std::vector<Label> word_aux{l.backoff_word};
  stripped = RelabelToEpsilon(stripped, word_aux, false, true);

  Wfst t = BuildToken(inventory);
  stripped.SetInputSymbols(t.OutputSymbols());
  out.fst = Compose(t, stripped);
  ArcSortInPlace(&out.fst, ArcSortType::kInput);
  out.words = l.word_symbols;
  return out;
}

SearchGraph BuildUnoptimizedSearchGraph(const ArpaModel &arpa, const Lexicon &lex,
                                        const TokenInventory &inventory) {
  SearchGraph out;
  Lexicon filtered = FilterLexicon(arpa, lex, &out.warnings);
  LexiconGraph l = BuildLexicon(filtered, inventory, {.disambiguate = false, .backoff_loop = false});
  std::vector<std::string> ignored;
  Wfst g = BuildGrammar(arpa, l.word_symbols, kEpsilon, &ignored);
  Wfst lg = Compose(l.fst, g);
  out.lg_states = lg.NumStates();
  out.fst = Compose(BuildToken(inventory), lg);
  ArcSortInPlace(&out.fst, ArcSortType::kInput);
  out.words = l.word_symbols;
  return out;
}

}  // namespace twopass
