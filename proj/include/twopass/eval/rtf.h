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

#ifndef TWOPASS_EVAL_RTF_H_
#define TWOPASS_EVAL_RTF_H_

#include <functional>
#include <vector>

#include "twopass/decoder/chunk_config.h"

namespace twopass {

// Nominal audio duration of `posterior_frames` subsampled frames.
double AudioMs(int posterior_frames, const ChunkConfig &chunks = {});

struct RtfMeasurement {
  std::vector<double> run_ms;
  double median_ms = 0.0;
  double audio_ms = 0.0;
  double rtf = 0.0;  // median_ms / audio_ms
};

// Runs `work` `runs` times with OpenMP limited to one thread and reports the
// median wall time over the audio duration.
RtfMeasurement MeasureRtf(const std::function<void()> &work, double audio_ms, int runs = 5);

double Median(std::vector<double> values);

}  // namespace twopass

#endif  // TWOPASS_EVAL_RTF_H_
