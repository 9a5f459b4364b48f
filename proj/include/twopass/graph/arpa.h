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

#ifndef TWOPASS_GRAPH_ARPA_H_
#define TWOPASS_GRAPH_ARPA_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twopass {

inline constexpr char kSentenceStart[] = "<s>";
inline constexpr char kSentenceEnd[] = "</s>";
inline constexpr char kUnknownWord[] = "<unk>";

// ln(10); ARPA log10 values are multiplied by this to get nats.
inline constexpr double kLn10 = 2.302585092994045684;

struct NgramEntry {
  double log10_prob = 0.0;
  std::optional<double> log10_backoff;
};

// Backoff n-gram model in ARPA form. Entries are keyed by their full word
// tuple; the order of an entry is the tuple length.
class ArpaModel {
 public:
  using Words = std::vector<std::string>;

  static ArpaModel Parse(std::istream &in);
  static ArpaModel Read(const std::string &path);
  void Write(std::ostream &out) const;
  void Write(const std::string &path) const;

  // Inserts or replaces an entry. Raises max_order as needed.
  void AddEntry(const Words &words, double log10_prob, std::optional<double> log10_backoff = {});

  // Inserts missing (k-1)-prefixes of order-k entries with their backed-off
  // probability and a zero backoff. Parse() calls this.
  void PatchHoles();

  int MaxOrder() const { return max_order_; }
  const std::map<Words, NgramEntry> &Entries() const { return entries_; }
  const NgramEntry *Find(const Words &words) const;
  bool HasExtensions(const Words &context) const;
  // Unigram vocabulary, including <s> and </s> when listed.
  std::vector<std::string> Vocabulary() const;

  // log10 p(word | history) with standard backoff; history is truncated to
  // the last MaxOrder()-1 words. Unknown words fall back to <unk> if present
  // and -inf otherwise.
  double LogProb10(const Words &history, const std::string &word) const;
  // -ln p(words </s> | <s>) in nats.
  double SentenceCost(const Words &words) const;

 private:
  std::map<Words, NgramEntry> entries_;
  int max_order_ = 0;
};

}  // namespace twopass

#endif  // TWOPASS_GRAPH_ARPA_H_
