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

#include "twopass/eval/fixture.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "twopass/error.h"
#include "twopass/eval/nbest_io.h"
#include "twopass/text.h"

namespace twopass {
namespace {

// Uniform integer in [lo, hi]. std::uniform_int_distribution is not
// specified bit-for-bit across standard libraries, so fixtures use this.
int UniformInt(std::mt19937_64 &rng, int lo, int hi) {
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

double Uniform01(std::mt19937_64 &rng) { return (rng() >> 11) * (1.0 / 9007199254740992.0); }

double Gaussian(std::mt19937_64 &rng) {
  double u1 = Uniform01(rng), u2 = Uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

bool IsPrefixConflict(const std::string &a, const std::string &b) {
  size_t n = std::min(a.size(), b.size());
  return a.compare(0, n, b, 0, n) == 0;
}

struct Generator {
  std::vector<std::string> words;
  // successors[h] for h in 0..V; index V is the sentence start.
  std::vector<std::vector<int>> successors;
  std::vector<std::vector<double>> weights;
  double end_prob;
  double random_jump;

  int Next(std::mt19937_64 &rng, int history) const {
    if (Uniform01(rng) < random_jump) return UniformInt(rng, 0, static_cast<int>(words.size()) - 1);
    double u = Uniform01(rng), acc = 0.0;
    const auto &w = weights[history];
    for (size_t i = 0; i < w.size(); ++i) {
      acc += w[i];
      if (u < acc) return successors[history][i];
    }
    return successors[history].back();
  }

  std::vector<std::string> Sentence(std::mt19937_64 &rng, int min_words, int max_words) const {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::vector<std::string> out;
      int h = static_cast<int>(words.size());
      while (true) {
        h = Next(rng, h);
        out.push_back(words[h]);
        if (static_cast<int>(out.size()) >= max_words || Uniform01(rng) < end_prob) break;
      }
      if (static_cast<int>(out.size()) >= min_words) return out;
    }
    throw ConfigError("fixture: cannot sample a sentence with at least " +
                      std::to_string(min_words) + " words");
  }
};

std::vector<int> SampleAlignment(std::mt19937_64 &rng, const LabelSequence &units,
                                 const FixtureOptions &o) {
  std::vector<int> align;
  for (int k = UniformInt(rng, 0, o.max_gap_frames); k > 0; --k) align.push_back(0);
  for (size_t i = 0; i < units.size(); ++i) {
    if (i > 0) {
      int gap = UniformInt(rng, 0, o.max_gap_frames);
      if (units[i] == units[i - 1]) gap = std::max(gap, 1);
      for (int k = 0; k < gap; ++k) align.push_back(0);
    }
    for (int k = UniformInt(rng, 1, o.max_unit_frames); k > 0; --k) align.push_back(units[i]);
  }
  for (int k = UniformInt(rng, 0, o.max_gap_frames); k > 0; --k) align.push_back(0);
  return align;
}

PosteriorMatrix MakePosteriors(std::mt19937_64 &rng, const std::vector<int> &align, int tokens,
                               const FixtureOptions &o) {
  const int frames = static_cast<int>(align.size());
  std::vector<double> values(static_cast<size_t>(frames) * tokens);
  std::vector<double> logits(tokens);
  for (int t = 0; t < frames; ++t) {
    for (int k = 0; k < tokens; ++k) {
      logits[k] = (k == align[t] ? o.peak : 0.0) + (o.noise > 0 ? o.noise * Gaussian(rng) : 0.0);
    }
    double norm = LogSumExp(logits);
    for (int k = 0; k < tokens; ++k) values[static_cast<size_t>(t) * tokens + k] = logits[k] - norm;
  }
  return PosteriorMatrix(frames, tokens, std::move(values));
}

}  // namespace

std::string SyntheticUtterance::Text() const { return Join(words, " "); }

ArpaModel EstimateBigramArpa(const std::vector<std::vector<std::string>> &corpus,
                             const std::vector<std::string> &vocabulary, double discount) {
  if (!(discount > 0.0 && discount < 1.0)) throw ConfigError("arpa estimate: discount must be in (0, 1)");
  std::map<std::string, double> unigram_counts;
  std::map<std::string, std::map<std::string, double>> bigram_counts;
  double total = 0.0;
  for (const auto &sentence : corpus) {
    std::string prev = kSentenceStart;
    for (size_t i = 0; i <= sentence.size(); ++i) {
      const std::string &w = i < sentence.size() ? sentence[i] : std::string(kSentenceEnd);
      unigram_counts[w] += 1.0;
      bigram_counts[prev][w] += 1.0;
      total += 1.0;
      prev = w;
    }
  }
  std::vector<std::string> predicted = vocabulary;
  predicted.push_back(kSentenceEnd);
  std::map<std::string, double> p_uni;
  for (const std::string &w : predicted) {
    p_uni[w] = (unigram_counts[w] + 1.0) / (total + static_cast<double>(predicted.size()));
  }

  ArpaModel arpa;
  std::map<std::string, double> backoff;
  for (const auto &[h, nexts] : bigram_counts) {
    double count = 0.0, seen_uni = 0.0;
    for (const auto &[w, c] : nexts) {
      count += c;
      seen_uni += p_uni[w];
    }
    double left = discount * static_cast<double>(nexts.size()) / count;
    backoff[h] = left / (1.0 - seen_uni);
    for (const auto &[w, c] : nexts) {
      arpa.AddEntry({h, w}, std::log10((c - discount) / count));
    }
  }
  auto bo = [&](const std::string &w) -> std::optional<double> {
    auto it = backoff.find(w);
    if (it == backoff.end()) return std::nullopt;
    return std::log10(it->second);
  };
  arpa.AddEntry({kSentenceStart}, -99.0, bo(kSentenceStart));
  for (const std::string &w : predicted) arpa.AddEntry({w}, std::log10(p_uni[w]), bo(w));
  return arpa;
}

SyntheticTask GenerateFixture(const FixtureOptions &o) {
  if (o.vocab_size < 2) throw ConfigError("fixture: vocab_size must be >= 2");
  if (o.num_units < 2 || o.num_units > 26) throw ConfigError("fixture: num_units must be in [2, 26]");
  if (o.min_word_len < 1 || o.max_word_len < o.min_word_len) {
    throw ConfigError("fixture: bad word length range");
  }
  if (o.min_words < 1 || o.max_words < o.min_words) throw ConfigError("fixture: bad sentence length range");
  if (o.noise < 0) throw ConfigError("fixture: noise must be >= 0");
  if (o.max_unit_frames < 1 || o.max_gap_frames < 1) throw ConfigError("fixture: frame counts must be >= 1");
  if (o.successors_per_word < 1) throw ConfigError("fixture: successors_per_word must be >= 1");

  std::mt19937_64 rng(o.seed);
  SyntheticTask task;
  task.options = o;
  std::vector<std::string> letters;
  for (int i = 0; i < o.num_units; ++i) letters.emplace_back(1, static_cast<char>('a' + i));
  task.inventory = TokenInventory(letters);

  // Prefix-free vocabulary: concatenated words split back uniquely.
  std::vector<std::string> vocab;
  std::set<std::string> seen;
  for (int attempt = 0; static_cast<int>(vocab.size()) < o.vocab_size; ++attempt) {
    if (attempt > 100000) {
      throw ConfigError("fixture: cannot build a prefix-free vocabulary of " +
                        std::to_string(o.vocab_size) + " words");
    }
    int len = UniformInt(rng, o.min_word_len, o.max_word_len);
    std::string w;
    for (int k = 0; k < len; ++k) w += letters[UniformInt(rng, 0, o.num_units - 1)];
    bool ok = true;
    for (const std::string &v : vocab) ok = ok && !IsPrefixConflict(v, w);
    if (ok && seen.insert(w).second) vocab.push_back(w);
  }
  for (const std::string &w : vocab) {
    Pronunciation p;
    p.word = w;
    for (char c : w) p.units.emplace_back(1, c);
    task.lexicon.Add(p);
  }

  Generator gen;
  gen.words = vocab;
  gen.end_prob = o.end_prob;
  gen.random_jump = o.random_jump;
  const int v = static_cast<int>(vocab.size());
  const int succ = std::min(o.successors_per_word, v);
  for (int h = 0; h <= v; ++h) {
    std::vector<int> pool(v);
    for (int i = 0; i < v; ++i) pool[i] = i;
    std::vector<int> chosen;
    std::vector<double> w;
    double sum = 0.0;
    for (int k = 0; k < succ; ++k) {
      int j = UniformInt(rng, k, v - 1);
      std::swap(pool[k], pool[j]);
      chosen.push_back(pool[k]);
      w.push_back(0.2 + Uniform01(rng));
      sum += w.back();
    }
    for (double &x : w) x /= sum;
    gen.successors.push_back(chosen);
    gen.weights.push_back(w);
  }

  std::vector<std::vector<std::string>> corpus;
  for (int i = 0; i < o.corpus_sentences; ++i) {
    corpus.push_back(gen.Sentence(rng, o.min_words, o.max_words));
  }
  task.arpa = EstimateBigramArpa(corpus, vocab, o.discount);

  std::map<std::string, LabelSequence> spelled;
  for (const std::string &w : vocab) {
    for (char c : w) spelled[w].push_back(task.inventory.Id(std::string(1, c)));
  }
  const int width = std::max(4, static_cast<int>(std::to_string(o.utterances).size()));
  for (int u = 0; u < o.utterances; ++u) {
    SyntheticUtterance utt;
    std::string num = std::to_string(u);
    utt.id = "utt" + std::string(width - num.size(), '0') + num;
    if (o.frames > 0) {
      // Words are added while a worst-case alignment still fits.
      const int per_unit = o.max_unit_frames + o.max_gap_frames;
      int h = v;
      int budget = o.frames - 2 * o.max_gap_frames;
      while (true) {
        int next = gen.Next(rng, h);
        int need = static_cast<int>(spelled[vocab[next]].size()) * per_unit;
        if (need > budget) break;
        budget -= need;
        utt.words.push_back(vocab[next]);
        h = next;
      }
      if (utt.words.empty()) throw ConfigError("fixture: frames too small for one word");
    } else {
      utt.words = gen.Sentence(rng, o.min_words, o.max_words);
    }
    for (const std::string &w : utt.words) {
      utt.units.insert(utt.units.end(), spelled[w].begin(), spelled[w].end());
    }
    utt.alignment = SampleAlignment(rng, utt.units, o);
    if (o.frames > 0) utt.alignment.resize(o.frames, 0);
    utt.posteriors = MakePosteriors(rng, utt.alignment, task.inventory.Size(), o);
    task.utterances.push_back(std::move(utt));
  }
  return task;
}

void WriteFixture(const SyntheticTask &task, const std::string &dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "posteriors", ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  task.inventory.Write((fs::path(dir) / "units.txt").string());
  task.lexicon.Write((fs::path(dir) / "lexicon.txt").string());
  task.arpa.Write((fs::path(dir) / "lm.arpa").string());
  std::vector<std::pair<std::string, std::string>> refs;
  for (const SyntheticUtterance &u : task.utterances) {
    refs.emplace_back(u.id, u.Text());
    u.posteriors.Write((fs::path(dir) / "posteriors" / (u.id + ".post")).string());
  }
  WriteReferences(refs, (fs::path(dir) / "refs.txt").string());
}

}  // namespace twopass
