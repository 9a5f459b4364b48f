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

#include "twopass/eval/rtf.h"

#include <algorithm>
#include <chrono>
#include <omp.h>

#include "twopass/error.h"

namespace twopass {

double AudioMs(int posterior_frames, const ChunkConfig &chunks) {
  return static_cast<double>(posterior_frames) * chunks.subsample * chunks.frame_shift_ms;
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

RtfMeasurement MeasureRtf(const std::function<void()> &work, double audio_ms, int runs) {
  if (!(audio_ms > 0)) throw ConfigError("rtf: audio duration must be positive");
  if (runs < 1) throw ConfigError("rtf: need at least one run");
  const int saved_threads = omp_get_max_threads();
  omp_set_num_threads(1);
  RtfMeasurement m;
  m.audio_ms = audio_ms;
  try {
    for (int r = 0; r < runs; ++r) {
      auto begin = std::chrono::steady_clock::now();
      work();
      auto end = std::chrono::steady_clock::now();
      m.run_ms.push_back(std::chrono::duration<double, std::milli>(end - begin).count());
    }
  } catch (...) {
    omp_set_num_threads(saved_threads);
    throw;
  }
  omp_set_num_threads(saved_threads);
  m.median_ms = Median(m.run_ms);
  m.rtf = m.median_ms / audio_ms;
  return m;
}

}  // namespace twopass
