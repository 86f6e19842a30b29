// Copyright 2026 The textbleach Authors
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

namespace textbleach {

// Decodes UTF-8 into code points. Invalid byte sequences become U+FFFD so
// arbitrary tweet bytes never abort a pipeline.
std::vector<char32_t> decode_utf8(std::string_view text);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);

std::size_t count_codepoints(std::string_view text);

// Character classes per the Unicode general categories (see unicode_tables).
bool is_whitespace(char32_t cp);        // White_Space property
bool is_letter(char32_t cp);            // category L*
bool is_number(char32_t cp);            // category N*
bool is_alphanumeric(char32_t cp);      // letter or number
bool is_uppercase(char32_t cp);         // Lu
bool is_lowercase(char32_t cp);         // Ll
bool is_digit(char32_t cp);             // Nd
bool is_emoji_presentation(char32_t cp);

// Simple (one-to-one) lowercase mapping; identity when none exists.
char32_t to_lower(char32_t cp);
std::string utf8_to_lower(std::string_view text);

}  // namespace textbleach
