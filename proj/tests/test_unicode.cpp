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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "textbleach/unicode.hpp"

using namespace textbleach;

TEST_CASE("decode ascii") {
    auto cps = decode_utf8("abc");
    REQUIRE(cps.size() == 3);
    CHECK(cps[0] == U'a');
    CHECK(cps[2] == U'c');
}

TEST_CASE("decode multibyte") {
    // é U+00E9 (2 bytes), ⟂ U+27C2 (3 bytes), 💥 U+1F4A5 (4 bytes)
    auto cps = decode_utf8("é⟂💥");
    REQUIRE(cps.size() == 3);
    CHECK(cps[0] == char32_t(0x00E9));
    CHECK(cps[1] == char32_t(0x27C2));
    CHECK(cps[2] == char32_t(0x1F4A5));
}

TEST_CASE("invalid bytes become U+FFFD") {
    std::string bad;
    bad += char(0xFF);  // never valid in UTF-8
    auto cps = decode_utf8(bad);
    REQUIRE(cps.size() == 1);
    CHECK(cps[0] == char32_t(0xFFFD));

    std::string truncated;
    truncated += char(0xE2);  // start of 3-byte sequence, then EOF
    cps = decode_utf8(truncated);
    REQUIRE(cps.size() >= 1);
    CHECK(cps[0] == char32_t(0xFFFD));

    std::string overlong;  // 0xC0 0x80 is an overlong encoding of NUL
    overlong += char(0xC0);
    overlong += char(0x80);
    cps = decode_utf8(overlong);
    for (char32_t cp : cps) CHECK(cp == char32_t(0xFFFD));
}

TEST_CASE("encode round trip") {
    std::string s = "HeLLo, ẅörld! 💥🔫 123";
    CHECK(encode_utf8(decode_utf8(s)) == s);
}

TEST_CASE("count codepoints") {
    CHECK(count_codepoints("") == 0);
    CHECK(count_codepoints("abc") == 3);
    CHECK(count_codepoints("💥🔫🔫🔫") == 4);
    CHECK(count_codepoints("Doritos") == 7);
}

TEST_CASE("letter and number classes") {
    CHECK(is_letter(U'a'));
    CHECK(is_letter(char32_t(0x00C9)));  // É
    CHECK(is_letter(char32_t(0x03BB)));  // λ
    CHECK(is_letter(char32_t(0x00DF)));  // ß
    CHECK_FALSE(is_letter(U'1'));
    CHECK_FALSE(is_letter(U'!'));

    CHECK(is_digit(U'0'));
    CHECK(is_digit(char32_t(0x0663)));   // arabic-indic three, Nd
    CHECK(is_number(char32_t(0x2167)));  // roman numeral VIII, Nl
    CHECK_FALSE(is_digit(char32_t(0x2167)));
    CHECK_FALSE(is_number(U'a'));

    CHECK(is_alphanumeric(U'a'));
    CHECK(is_alphanumeric(U'7'));
    CHECK_FALSE(is_alphanumeric(U'!'));
    CHECK_FALSE(is_alphanumeric(char32_t(0x1F4A5)));  // 💥 is So
}

TEST_CASE("case classes") {
    CHECK(is_uppercase(U'A'));
    CHECK(is_uppercase(char32_t(0x039B)));  // Λ
    CHECK_FALSE(is_uppercase(U'a'));
    CHECK(is_lowercase(U'z'));
    CHECK(is_lowercase(char32_t(0x00E9)));  // é
    CHECK_FALSE(is_lowercase(U'Z'));
    CHECK_FALSE(is_uppercase(U'5'));
    CHECK_FALSE(is_lowercase(U'5'));
}

TEST_CASE("whitespace") {
    CHECK(is_whitespace(U' '));
    CHECK(is_whitespace(U'\t'));
    CHECK(is_whitespace(U'\n'));
    CHECK(is_whitespace(char32_t(0x00A0)));  // nbsp
    CHECK(is_whitespace(char32_t(0x3000)));  // ideographic space
    CHECK_FALSE(is_whitespace(U'a'));
    CHECK_FALSE(is_whitespace(char32_t(0x200B)));  // zwsp is Cf, not space
}

TEST_CASE("emoji presentation") {
    CHECK(is_emoji_presentation(char32_t(0x1F4A5)));  // 💥
    CHECK(is_emoji_presentation(char32_t(0x1F52B)));  // 🔫
    CHECK(is_emoji_presentation(char32_t(0x1F602)));  // 😂
    CHECK(is_emoji_presentation(char32_t(0x1F389)));  // 🎉
    CHECK_FALSE(is_emoji_presentation(U'a'));
    CHECK_FALSE(is_emoji_presentation(U'#'));         // needs VS-16
    CHECK_FALSE(is_emoji_presentation(char32_t(0x2639)));  // ☹ text default
    CHECK_FALSE(is_emoji_presentation(char32_t(0x27C2)));  // ⟂
}

TEST_CASE("lowercase mapping") {
    CHECK(to_lower(U'A') == U'a');
    CHECK(to_lower(char32_t(0x00C9)) == char32_t(0x00E9));  // É -> é
    CHECK(to_lower(char32_t(0x039B)) == char32_t(0x03BB));  // Λ -> λ
    CHECK(to_lower(U'5') == U'5');
    CHECK(to_lower(U'a') == U'a');
    CHECK(utf8_to_lower("HeLLo É") == "hello é");
    CHECK(utf8_to_lower("ABC123!") == "abc123!");
}
