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

#include "twopass/graph/arpa.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "twopass/error.h"

namespace twopass {
namespace {

std::string Trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ParseNumber(const std::string &field, size_t lineno) {
  try {
    size_t used = 0;
    double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::logic_error &) {
    throw FormatError("ARPA line " + std::to_string(lineno) + ": bad number '" + field + "'");
  }
}

}  // namespace

ArpaModel ArpaModel::Parse(std::istream &in) {
  ArpaModel model;
  std::map<int, size_t> declared;
  std::string raw;
  size_t lineno = 0;
  enum class Section { kPreamble, kData, kNgrams, kEnd } section = Section::kPreamble;
  int order = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = Trim(raw);
    if (line.empty()) continue;
    if (line == "\\data\\") {
      section = Section::kData;
      continue;
    }
    if (line == "\\end\\") {
      section = Section::kEnd;
      break;
    }
    if (line.front() == '\\') {
      // "\N-grams:"
      if (line.size() < 9 || line.substr(line.size() - 7) != "-grams:")
        throw FormatError("ARPA line " + std::to_string(lineno) + ": unknown section '" + line + "'");
      order = static_cast<int>(ParseNumber(line.substr(1, line.size() - 8), lineno));
      if (!declared.count(order))
        throw FormatError("ARPA line " + std::to_string(lineno) + ": section for undeclared order " +
                          std::to_string(order));
      section = Section::kNgrams;
      continue;
    }
    switch (section) {
      case Section::kPreamble:
        break;
      case Section::kData: {
        if (line.rfind("ngram ", 0) != 0)
          throw FormatError("ARPA line " + std::to_string(lineno) + ": expected 'ngram N=count'");
        size_t eq = line.find('=');
        if (eq == std::string::npos)
          throw FormatError("ARPA line " + std::to_string(lineno) + ": expected 'ngram N=count'");
        int n = static_cast<int>(ParseNumber(Trim(line.substr(6, eq - 6)), lineno));
        declared[n] = static_cast<size_t>(ParseNumber(Trim(line.substr(eq + 1)), lineno));
        break;
      }
      case Section::kNgrams: {
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.size() != static_cast<size_t>(order) + 1 && tok.size() != static_cast<size_t>(order) + 2)
          throw FormatError("ARPA line " + std::to_string(lineno) + ": expected " +
                            std::to_string(order) + " words");
        double prob = ParseNumber(tok[0], lineno);
        if (prob > 0) throw FormatError("ARPA line " + std::to_string(lineno) + ": positive log probability");
        Words words(tok.begin() + 1, tok.begin() + 1 + order);
        std::optional<double> backoff;
        if (tok.size() == static_cast<size_t>(order) + 2) backoff = ParseNumber(tok.back(), lineno);
        model.AddEntry(words, prob, backoff);
        break;
      }
      case Section::kEnd:
        break;
    }
  }
  if (section == Section::kPreamble) throw FormatError("ARPA: missing \\data\\ section");
  for (const auto &[n, count] : declared) {
    size_t actual = 0;
    for (const auto &[words, e] : model.entries_) actual += words.size() == static_cast<size_t>(n);
    if (actual != count)
      throw FormatError("ARPA: declared " + std::to_string(count) + " " + std::to_string(n) +
                        "-grams, found " + std::to_string(actual));
  }
  for (const auto &[words, e] : model.entries_) {
    if (static_cast<int>(words.size()) < model.max_order_ && !e.log10_backoff &&
        words.back() != kSentenceEnd && model.HasExtensions(words)) {
      std::string ctx;
      for (const auto &w : words) ctx += (ctx.empty() ? "" : " ") + w;
      throw FormatError("ARPA: context '" + ctx + "' has extensions but no backoff weight");
    }
  }
  model.PatchHoles();
  return model;
}

ArpaModel ArpaModel::Read(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ARPA file " + path);
  return Parse(in);
}

void ArpaModel::Write(std::ostream &out) const {
  out << "\\data\\\n";
  std::vector<size_t> counts(max_order_ + 1, 0);
  for (const auto &[words, e] : entries_) ++counts[words.size()];
  for (int n = 1; n <= max_order_; ++n) out << "ngram " << n << "=" << counts[n] << "\n";
  out << std::setprecision(10);
  for (int n = 1; n <= max_order_; ++n) {
    out << "\n\\" << n << "-grams:\n";
    for (const auto &[words, e] : entries_) {
      if (static_cast<int>(words.size()) != n) continue;
      out << e.log10_prob;
      for (size_t i = 0; i < words.size(); ++i) out << (i == 0 ? '\t' : ' ') << words[i];
      if (e.log10_backoff) out << '\t' << *e.log10_backoff;
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

void ArpaModel::Write(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write ARPA file " + path);
  Write(out);
}

void ArpaModel::AddEntry(const Words &words, double log10_prob, std::optional<double> log10_backoff) {
  if (words.empty()) throw FormatError("ARPA entry without words");
  entries_[words] = NgramEntry{log10_prob, log10_backoff};
  max_order_ = std::max(max_order_, static_cast<int>(words.size()));
}

const NgramEntry *ArpaModel::Find(const Words &words) const {
  auto it = entries_.find(words);
  return it == entries_.end() ? nullptr : &it->second;
}

bool ArpaModel::HasExtensions(const Words &context) const {
  auto it = entries_.upper_bound(context);
  return it != entries_.end() && it->first.size() > context.size() &&
         std::equal(context.begin(), context.end(), it->first.begin());
}

std::vector<std::string> ArpaModel::Vocabulary() const {
  std::vector<std::string> vocab;
  for (const auto &[words, e] : entries_)
    if (words.size() == 1) vocab.push_back(words[0]);
  return vocab;
}

void ArpaModel::PatchHoles() {
  for (int n = 2; n <= max_order_; ++n) {
    std::vector<Words> missing;
    for (const auto &[words, e] : entries_) {
      if (static_cast<int>(words.size()) != n) continue;
      Words prefix(words.begin(), words.end() - 1);
      if (!entries_.count(prefix)) missing.push_back(prefix);
    }
    for (const auto &prefix : missing) {
      if (entries_.count(prefix)) continue;
      Words history(prefix.begin(), prefix.end() - 1);
      double p = LogProb10(history, prefix.back());
      entries_[prefix] = NgramEntry{p, 0.0};
    }
  }
}

double ArpaModel::LogProb10(const Words &history, const std::string &word) const {
  const size_t keep = max_order_ > 0 ? static_cast<size_t>(max_order_ - 1) : 0;
  Words h = history.size() > keep ? Words(history.end() - keep, history.end()) : history;
  double backoff = 0.0;
  for (;;) {
    Words key = h;
    key.push_back(word);
    if (const NgramEntry *e = Find(key)) return backoff + e->log10_prob;
    if (h.empty()) break;
    if (const NgramEntry *ctx = Find(h)) backoff += ctx->log10_backoff.value_or(0.0);
    h.erase(h.begin());
  }
  if (word != kUnknownWord && word != kSentenceStart && Find({kUnknownWord}))
    return LogProb10(history, kUnknownWord);
  return -std::numeric_limits<double>::infinity();
}

double ArpaModel::SentenceCost(const Words &words) const {
  Words history{kSentenceStart};
  double total = 0.0;
  for (const auto &w : words) {
    total += LogProb10(history, w);
    history.push_back(w);
  }
  total += LogProb10(history, kSentenceEnd);
  return -total * kLn10;
}

}  // namespace twopass
