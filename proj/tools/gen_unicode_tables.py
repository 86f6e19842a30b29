#!/usr/bin/env python3
# Copyright 2026 The textbleach Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates src/unicode_tables.cpp from the Python unicodedata module.

The Emoji_Presentation ranges require the third-party `regex` module
(pip install regex), which exposes the UTS #51 emoji properties.

Usage: python3 tools/gen_unicode_tables.py > src/unicode_tables.cpp
"""

import sys
import unicodedata

try:
    import regex
    _EMOJI_RE = regex.compile(r"\p{Emoji_Presentation}")

    def is_emoji_presentation(cp):
        return bool(_EMOJI_RE.fullmatch(chr(cp)))
except ImportError:
    sys.stderr.write("warning: `regex` module missing, emoji table will be empty\n")

    def is_emoji_presentation(cp):
        return False

MAX_CP = 0x110000
SURROGATES = range(0xD800, 0xE000)


def ranges_for(pred):
    out = []
    start = None
    for cp in range(MAX_CP):
        ok = cp not in SURROGATES and pred(cp)
        if ok and start is None:
            start = cp
        elif not ok and start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, MAX_CP - 1))
    return out


def category(cp):
    return unicodedata.category(chr(cp))


def emit_ranges(name, ranges):
    print(f"const CodepointRange {name}[] = {{")
    for i in range(0, len(ranges), 4):
        row = ", ".join(f"{{0x{lo:X}, 0x{hi:X}}}" for lo, hi in ranges[i:i + 4])
        print(f"    {row},")
    print("};")
    print(f"const std::size_t {name}Count = {len(ranges)};")
    print()


def main():
    letters = ranges_for(lambda cp: category(cp).startswith("L"))
    numbers = ranges_for(lambda cp: category(cp).startswith("N"))
    upper = ranges_for(lambda cp: category(cp) == "Lu")
    lower = ranges_for(lambda cp: category(cp) == "Ll")
    digit = ranges_for(lambda cp: category(cp) == "Nd")
    emoji = ranges_for(is_emoji_presentation)

    lower_map = []
    for cp in range(MAX_CP):
        if cp in SURROGATES:
            continue
        low = chr(cp).lower()
        if len(low) == 1 and ord(low) != cp:
            lower_map.append((cp, ord(low)))

    print("// Generated by tools/gen_unicode_tables.py from Python "
          f"unicodedata {unicodedata.unidata_version}. Do not edit by hand.")
    print("""
#include "textbleach/unicode_tables.hpp"

namespace textbleach::detail {
""")
    emit_ranges("kLetterRanges", letters)
    emit_ranges("kNumberRanges", numbers)
    emit_ranges("kUppercaseRanges", upper)
    emit_ranges("kLowercaseRanges", lower)
    emit_ranges("kDigitRanges", digit)
    emit_ranges("kEmojiPresentationRanges", emoji)

    print(f"const CaseMapping kLowercaseMap[] = {{")
    for i in range(0, len(lower_map), 4):
        row = ", ".join(f"{{0x{a:X}, 0x{b:X}}}" for a, b in lower_map[i:i + 4])
        print(f"    {row},")
    print("};")
    print(f"const std::size_t kLowercaseMapCount = {len(lower_map)};")
    print()
    print("}  // namespace textbleach::detail")


if __name__ == "__main__":
    main()
