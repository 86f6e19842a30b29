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

#include "textbleach/unicode.hpp"

#include <algorithm>

#include "textbleach/unicode_tables.hpp"

namespace textbleach {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool in_ranges(const detail::CodepointRange* ranges, std::size_t count,
               char32_t cp) {
    const auto* end = ranges + count;
    const auto* it = std::upper_bound(
        ranges, end, cp,
        [](char32_t v, const detail::CodepointRange& r) { return v < r.lo; });
    return it != ranges && cp <= (it - 1)->hi;
}

}  // namespace

std::vector<char32_t> decode_utf8(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const unsigned char b0 = text[i];
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + len > n) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            const unsigned char b = text[i + k];
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        // Reject overlong encodings, surrogates and out-of-range values.
        static constexpr char32_t kMinForLen[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (!ok || cp < kMinForLen[len] || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

std::size_t count_codepoints(std::string_view text) {
    std::size_t count = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) ++count;
    }
    return count;
}

bool is_whitespace(char32_t cp) {
    // The Unicode White_Space property.
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_letter(char32_t cp) {
    return in_ranges(detail::kLetterRanges, detail::kLetterRangesCount, cp);
}

bool is_number(char32_t cp) {
    return in_ranges(detail::kNumberRanges, detail::kNumberRangesCount, cp);
}

bool is_alphanumeric(char32_t cp) { return is_letter(cp) || is_number(cp); }

bool is_uppercase(char32_t cp) {
    return in_ranges(detail::kUppercaseRanges, detail::kUppercaseRangesCount,
                     cp);
}

bool is_lowercase(char32_t cp) {
    return in_ranges(detail::kLowercaseRanges, detail::kLowercaseRangesCount,
                     cp);
}

bool is_digit(char32_t cp) {
    return in_ranges(detail::kDigitRanges, detail::kDigitRangesCount, cp);
}

bool is_emoji_presentation(char32_t cp) {
    return in_ranges(detail::kEmojiPresentationRanges,
                     detail::kEmojiPresentationRangesCount, cp);
}

char32_t to_lower(char32_t cp) {
    const auto* begin = detail::kLowercaseMap;
    const auto* end = begin + detail::kLowercaseMapCount;
    const auto* it = std::lower_bound(
        begin, end, cp,
        [](const detail::CaseMapping& m, char32_t v) { return m.from < v; });
    if (it != end && it->from == cp) return it->to;
    return cp;
}

std::string utf8_to_lower(std::string_view text) {
    auto cps = decode_utf8(text);
    for (auto& cp : cps) cp = to_lower(cp);
    return encode_utf8(cps);
}

}  // namespace textbleach
