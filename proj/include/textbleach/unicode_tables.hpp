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
#include <cstdint>

namespace textbleach::detail {

struct CodepointRange {
    char32_t lo;
    char32_t hi;
};

struct CaseMapping {
    char32_t from;
    char32_t to;
};

// Sorted, non-overlapping ranges generated from the Unicode character
// database (see tools/gen_unicode_tables.py).
extern const CodepointRange kLetterRanges[];
extern const std::size_t kLetterRangesCount;
extern const CodepointRange kNumberRanges[];
extern const std::size_t kNumberRangesCount;
extern const CodepointRange kUppercaseRanges[];
extern const std::size_t kUppercaseRangesCount;
extern const CodepointRange kLowercaseRanges[];
extern const std::size_t kLowercaseRangesCount;
extern const CodepointRange kDigitRanges[];
extern const std::size_t kDigitRangesCount;
extern const CodepointRange kEmojiPresentationRanges[];
extern const std::size_t kEmojiPresentationRangesCount;

// Simple one-to-one lowercase mappings, sorted by `from`.
extern const CaseMapping kLowercaseMap[];
extern const std::size_t kLowercaseMapCount;

}  // namespace textbleach::detail
