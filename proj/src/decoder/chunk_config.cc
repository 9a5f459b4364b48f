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

#include "twopass/decoder/chunk_config.h"

#include <sstream>
#include <vector>

#include "twopass/error.h"

namespace twopass {

void ChunkConfig::Validate() const {
  if (subsample < 1) throw ConfigError("chunk: subsample must be >= 1");
  if (frame_shift_ms <= 0) throw ConfigError("chunk: frame_shift_ms must be positive");
  if (n_left < 0 || n_right < 0) throw ConfigError("chunk: context sizes must be non-negative");
  if (n_center < subsample) throw ConfigError("chunk: n_center must be >= subsample");
  if (n_left % subsample || n_center % subsample || n_right % subsample) {
    throw ConfigError("chunk: sizes must be multiples of subsample (" + std::to_string(subsample) + ")");
  }
}

double LatencyMs(const ChunkConfig &chunks) {
  return static_cast<double>(chunks.n_center + chunks.n_right) * chunks.frame_shift_ms;
}

ChunkConfig ParseChunkConfig(const std::string &text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      parts.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw ConfigError("chunk: cannot parse '" + text + "', expected Nl,Nc,Nr");
    }
  }
  if (parts.size() != 3) throw ConfigError("chunk: cannot parse '" + text + "', expected Nl,Nc,Nr");
  ChunkConfig c;
  c.n_left = parts[0];
  c.n_center = parts[1];
  c.n_right = parts[2];
  c.Validate();
  return c;
}

}  // namespace twopass
