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

#ifndef TWOPASS_EVAL_NBEST_IO_H_
#define TWOPASS_EVAL_NBEST_IO_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twopass/decoder/stream_decoder.h"
#include "twopass/graph/lexicon.h"
#include "twopass/rescore/rescorer.h"

namespace twopass {

// One line of an n-best file:
//   utt_id rank graph_score acoustic_score word1 word2 ...
// Rescored files append "rescore final_score" after the words.
struct NbestRecord {
  std::string utt;
  int rank = 1;  // 1-based
  double graph_cost = 0.0;
  double acoustic_cost = 0.0;
  std::vector<std::string> words;
  std::optional<double> rescore;
  std::optional<double> final_score;
};

void WriteNbestRecord(std::ostream &out, const NbestRecord &record);
std::vector<NbestRecord> ReadNbestRecords(std::istream &in, bool rescored);
std::vector<NbestRecord> ReadNbestRecords(const std::string &path, bool rescored);

std::vector<NbestRecord> ToRecords(const std::string &utt, const NBestList &nbest,
                                   const SymbolTable &words);
std::vector<NbestRecord> ToRecords(const std::string &utt, const RescoreResult &result,
                                   const SymbolTable &words);

// Consecutive records grouped by utterance, in file order.
std::vector<std::pair<std::string, std::vector<NbestRecord>>> GroupByUtterance(
    const std::vector<NbestRecord> &records);

// Rebuilds decoder hypotheses from records: words are added to `words` as
// needed and units come from splitting words into characters.
NBestList RecordsToNbest(const std::vector<NbestRecord> &records, SymbolTable *words,
                         const TokenInventory &inventory);

std::vector<std::string> WordStrings(const std::vector<Label> &words, const SymbolTable &table);

// "utt_id<TAB>text" per line, in file order.
std::vector<std::pair<std::string, std::string>> ReadReferences(const std::string &path);
void WriteReferences(const std::vector<std::pair<std::string, std::string>> &refs,
                     const std::string &path);

}  // namespace twopass

#endif  // TWOPASS_EVAL_NBEST_IO_H_
