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

#ifndef TWOPASS_GRAPH_BUILDERS_H_
#define TWOPASS_GRAPH_BUILDERS_H_

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "twopass/fst/wfst.h"
#include "twopass/graph/arpa.h"
#include "twopass/graph/lexicon.h"

namespace twopass {

// Grammar acceptor G. One state per n-gram context, word arcs weighted by
// -ln p, backoff arcs to the next shorter context carrying the backoff
// weight and `backoff_label` on both sides (epsilon by default). "</s>"
// becomes final weights. ARPA words missing from `words` are skipped and
// reported in `warnings`.
Wfst BuildGrammar(const ArpaModel &arpa, std::shared_ptr<const SymbolTable> words,
                  Label backoff_label = kEpsilon, std::vector<std::string> *warnings = nullptr);
// Convenience: word table built from the ARPA vocabulary.
Wfst BuildGrammar(const ArpaModel &arpa);

struct LexiconOptions {
  bool disambiguate = true;   // append #1, #2, ... to homophones and prefixes
  bool backoff_loop = false;  // add a #0:#0 self-loop for the grammar's backoff arcs
};

struct LexiconGraph {
  Wfst fst;
  std::shared_ptr<SymbolTable> unit_symbols;  // input side
  std::shared_ptr<SymbolTable> word_symbols;  // output side
  std::vector<Label> disambig_units;          // #0 (if any), #1, #2, ... on the input side
  Label backoff_unit = kNoLabel;              // #0 on the input side
  Label backoff_word = kNoLabel;              // #0 on the output side
};

// Lexicon transducer L: unit sequences to words, closed over words. Each
// pronunciation is a path from the loop state back to itself whose last arc
// carries the word; throws ConfigError on units missing from the inventory.
// When `word_symbols` is given it is extended, otherwise a fresh table is
// made.
LexiconGraph BuildLexicon(const Lexicon &lex, const TokenInventory &inventory,
                          const LexiconOptions &opts = {},
                          std::shared_ptr<SymbolTable> word_symbols = nullptr);

// CTC token transducer T from frame labels (token id + 1) to units. State 0
// is "after blank or at start"; state u is "last frame was unit u". Repeats
// of a unit collapse; a blank separates repeats. `passthrough` labels get
// self-loops on every state.
Wfst BuildToken(const TokenInventory &inventory, const std::vector<Label> &passthrough = {});

struct GraphOptions {
  size_t max_determinize_states = 1000000;
};

struct SearchGraph {
  Wfst fst;  // frame labels -> words, arc-sorted on input
  std::shared_ptr<const SymbolTable> words;
  std::vector<std::string> warnings;
  size_t lg_states = 0;   // |L∘G|
  size_t det_states = 0;  // |det(L∘G)|
  size_t min_states = 0;  // |min(det(L∘G))|
};

// S = T ∘ min(det(L ∘ G)) with disambiguation symbols removed after
// minimization. Words present in only one of lexicon and LM are dropped with
// a warning; "<unk>" is kept only if both define it.
SearchGraph BuildSearchGraph(const ArpaModel &arpa, const Lexicon &lex,
                             const TokenInventory &inventory, const GraphOptions &opts = {});

// T ∘ (L ∘ G) without disambiguation, determinization or minimization. Same
// weighted relation as BuildSearchGraph; used as a reference.
SearchGraph BuildUnoptimizedSearchGraph(const ArpaModel &arpa, const Lexicon &lex,
                                        const TokenInventory &inventory);

}  // namespace twopass

#endif  // TWOPASS_GRAPH_BUILDERS_H_
