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

#include "twopass/ctc/char_lm.h"

#include <cmath>

#include "twopass/error.h"

namespace twopass {

std::vector<double> UniformCharLm::NextLogProbs(std::span<const Label>) const {
  return std::vector<double>(num_labels_, -std::log(static_cast<double>(num_labels_)));
}

NgramCharLm::NgramCharLm(ArpaModel arpa, TokenInventory inventory)
    : arpa_(std::move(arpa)), inventory_(std::move(inventory)) {}

std::vector<double> NgramCharLm::NextLogProbs(std::span<const Label> prefix) const {
  ArpaModel::Words history{kSentenceStart};
  const size_t keep = arpa_.MaxOrder() > 1 ? static_cast<size_t>(arpa_.MaxOrder() - 1) : 0;
  size_t first = prefix.size() > keep ? prefix.size() - keep : 0;
  if (first > 0) history.clear();
  for (size_t i = first; i < prefix.size(); ++i) history.push_back(inventory_.Symbol(prefix[i]));

  std::vector<double> out(inventory_.Size());
  out[kEndOfSequence] = arpa_.LogProb10(history, kSentenceEnd) * kLn10;
  for (int k = 1; k < inventory_.Size(); ++k)
    out[k] = arpa_.LogProb10(history, inventory_.Symbol(k)) * kLn10;
  double norm = LogSumExp(out);
  if (norm == kLogZero) throw ConfigError("character LM assigns zero probability to every label");
  for (double &v : out) v -= norm;
  return out;
}

}  // namespace twopass
