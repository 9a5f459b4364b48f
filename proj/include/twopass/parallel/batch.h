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

#ifndef TWOPASS_PARALLEL_BATCH_H_
#define TWOPASS_PARALLEL_BATCH_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twopass/decoder/stream_decoder.h"

namespace twopass {

struct BatchDecodeOptions {
  std::optional<ChunkConfig> chunks;  // single-shot decoding when unset
  BeamConfig beam;
  int nbest = 5;
};

struct DecodeOutcome {
  NBestList nbest;
  std::string error;               // empty on success
  std::vector<int> partial_words;  // best partial hypothesis on failure
  bool ok() const { return error.empty(); }
};

// Decodes utterances one after another.
std::vector<DecodeOutcome> DecodeBatchSerial(std::shared_ptr<const Wfst> graph,
                                             const std::vector<PosteriorMatrix> &posteriors,
                                             const BatchDecodeOptions &options);

// Decodes utterances concurrently, one session per utterance over the shared
// graph. Results match DecodeBatchSerial exactly.
std::vector<DecodeOutcome> DecodeBatchParallel(std::shared_ptr<const Wfst> graph,
                                               const std::vector<PosteriorMatrix> &posteriors,
                                               const BatchDecodeOptions &options,
                                               int num_threads = 0);

}  // namespace twopass

#endif  // TWOPASS_PARALLEL_BATCH_H_
