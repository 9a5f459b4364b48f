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

#include "twopass/parallel/batch.h"

#include <omp.h>

#include "twopass/error.h"

namespace twopass {
namespace {

DecodeOutcome DecodeOne(const std::shared_ptr<const Wfst> &graph, const PosteriorMatrix &post,
                        const BatchDecodeOptions &options) {
  DecodeOutcome out;
  try {
    if (options.chunks) {
      out.nbest = DecodeChunked(graph, post, *options.chunks, options.beam, options.nbest);
    } else {
      out.nbest = DecodePosteriors(graph, post, options.beam, options.nbest);
    }
  } catch (const EmptyResultError &e) {
    out.error = e.what();
    out.partial_words = e.partial_words();
  } catch (const std::exception &e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<DecodeOutcome> DecodeBatchSerial(std::shared_ptr<const Wfst> graph,
                                             const std::vector<PosteriorMatrix> &posteriors,
                                             const BatchDecodeOptions &options) {
  std::vector<DecodeOutcome> out;
  out.reserve(posteriors.size());
  for (const PosteriorMatrix &post : posteriors) out.push_back(DecodeOne(graph, post, options));
  return out;
}

std::vector<DecodeOutcome> DecodeBatchParallel(std::shared_ptr<const Wfst> graph,
                                               const std::vector<PosteriorMatrix> &posteriors,
                                               const BatchDecodeOptions &options,
                                               int num_threads) {
  std::vector<DecodeOutcome> out(posteriors.size());
  const int n = static_cast<int>(posteriors.size());
  const int threads = num_threads > 0 ? num_threads : omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) out[i] = DecodeOne(graph, posteriors[i], options);
  return out;
}

}  // namespace twopass
