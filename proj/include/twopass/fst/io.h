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

#ifndef TWOPASS_FST_IO_H_
#define TWOPASS_FST_IO_H_

#include <iosfwd>
#include <string>

#include "twopass/fst/wfst.h"

namespace twopass {

// Text form: one arc per line "src dst ilabel olabel weight", final states as
// "state [weight]". The source of the first arc line is the start state
// (the first final line if there are no arcs).
Wfst ReadWfstText(std::istream &in);
void WriteWfstText(const Wfst &fst, std::ostream &out);

// Binary form, little-endian:
//   "WFST1"
//   u32 num_states, u32 start (0xffffffff for none), u32 num_arcs,
//   u32 num_finals
//   num_arcs  x (u32 src, u32 ilabel, u32 olabel, f32 weight, u32 next)
//   num_finals x (u32 state, f32 weight)
//   u8 has_isymbols [u32 count, count x (u32 id, u32 len, bytes)]
//   u8 has_osymbols [same]
// Weights are stored as f32, so a round trip is exact only to float
// precision.
Wfst ReadWfstBinary(std::istream &in);
void WriteWfstBinary(const Wfst &fst, std::ostream &out);

Wfst ReadWfst(const std::string &path);  // by magic: binary or text
void WriteWfst(const Wfst &fst, const std::string &path, bool binary = true);

}  // namespace twopass

#endif  // TWOPASS_FST_IO_H_
