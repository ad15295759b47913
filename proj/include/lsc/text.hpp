// Copyright 2026 The LSC Toolkit Authors
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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lsc {

// NFC normalization followed by Unicode case folding. All lemma comparisons in
// the toolkit go through this function.
std::string normalize_lemma(std::string_view s);

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view s);

// Length of a UTF-8 string in code points.
std::size_t codepoint_length(std::string_view utf8);

bool is_punctuation(char32_t c);
bool is_word_char(char32_t c);

// Splits on ASCII whitespace, dropping empty fields.
std::vector<std::string> split_ws(std::string_view line);
std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace lsc
