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

#ifndef TWOPASS_ERROR_H_
#define TWOPASS_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace twopass {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid option values, mismatched symbol tables, unknown lexicon units.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input files (ARPA, graph, posterior, n-best).
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// An algorithm was called on input violating its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Determinization exceeded its state budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Operation not allowed in the current object state, e.g. pushing frames
// into a finalized decode session.
class StateError : public Error {
 public:
  using Error::Error;
};

// Reference label sequence cannot be aligned to the given number of frames.
class InfeasibleAlignmentError : public Error {
 public:
  using Error::Error;
};

// Decoding finished without any token in a final state. Carries the words of
// the best partial hypothesis.
class EmptyResultError : public Error {
 public:
  EmptyResultError(const std::string &what, std::vector<int> partial_words)
      : Error(what), partial_words_(std::move(partial_words)) {}
  const std::vector<int> &partial_words() const { return partial_words_; }

 private:
  std::vector<int> partial_words_;
};

// Failure inside a pipeline stage; the stage name is prefixed to the message.
class StageError : public Error {
 public:
  StageError(const std::string &stage, const std::string &what)
      : Error("[" + stage + "] " + what), stage_(stage) {}
  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace twopass

#endif  // TWOPASS_ERROR_H_
