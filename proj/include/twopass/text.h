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

#ifndef TWOPASS_TEXT_H_
#define TWOPASS_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace twopass {

// Splits UTF-8 text into code points; each element holds the bytes of one
// code point. Throws FormatError on malformed input.
std::vector<std::string> SplitUtf8(std::string_view text);

// Removes ASCII whitespace.
std::string StripWhitespace(std::string_view text);

// Splits on runs of spaces and tabs.
std::vector<std::string> SplitFields(std::string_view line);

std::string Join(const std::vector<std::string> &parts, std::string_view sep);

}  // namespace twopass

#endif  // TWOPASS_TEXT_H_
