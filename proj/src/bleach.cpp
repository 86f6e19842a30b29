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

#include "textbleach/bleach.hpp"

#include <algorithm>

#include "textbleach/error.hpp"
#include "textbleach/unicode.hpp"

namespace textbleach {

namespace {

constexpr char32_t kVariationSelector16 = 0xFE0F;

bool is_eye(char32_t c) {
    return c == U':' || c == U';' || c == U'8' || c == U'=' || c == U'x' ||
           c == U'X';
}

bool is_nose(char32_t c) {
    return c == U'-' || c == U'o' || c == U'*' || c == U'\'';
}

bool is_mouth(char32_t c) {
    switch (c) {
        case U')': case U'(': case U']': case U'[':
        case U'd': case U'D': case U'p': case U'P':
        case U'/': case U'\\': case U':': case U'}':
        case U'{': case U'@': case U'|':
            return true;
        default:
            return false;
    }
}

// Length of the longest emoticon starting at `pos`, or 0. Classic ASCII
// family: eyes [:;8=xX], optional nose [-o*'], mouth, its mirrored form,
// and the <3 heart. Callers only invoke this on non-alphanumeric start
// characters, so a match never begins inside a word.
std::size_t emoticon_match(const std::vector<char32_t>& cps, std::size_t pos) {
    const std::size_t n = cps.size();
    auto at = [&](std::size_t i) { return i < n ? cps[i] : char32_t(0); };

    if (at(pos) == U'<' && at(pos + 1) == U'3') return 2;
    // eyes [nose] mouth
    if (is_eye(at(pos))) {
        if (is_nose(at(pos + 1)) && is_mouth(at(pos + 2))) return 3;
        if (is_mouth(at(pos + 1))) return 2;
    }
    // mouth [nose] eyes
    if (is_mouth(at(pos))) {
        if (is_nose(at(pos + 1)) && is_eye(at(pos + 2))) return 3;
        if (is_eye(at(pos + 1))) return 2;
    }
    return 0;
}

// True when the code point at `pos` renders as emoji: it either carries the
// Emoji_Presentation property or is followed by U+FE0F. Sets `consumed` to
// the number of code points belonging to it (2 when a VS-16 trails).
bool emoji_at(const std::vector<char32_t>& cps, std::size_t pos,
              std::size_t& consumed) {
    const bool vs16 = pos + 1 < cps.size() && cps[pos + 1] == kVariationSelector16;
    if (is_emoji_presentation(cps[pos])) {
        consumed = vs16 ? 2 : 1;
        return true;
    }
    if (vs16) {
        consumed = 2;
        return true;
    }
    return false;
}

}  // namespace

std::string_view channel_name(Channel c) {
    switch (c) {
        case Channel::Frequency: return "freq";
        case Channel::Length: return "len";
        case Channel::PunctC: return "punctc";
        case Channel::PunctA: return "puncta";
        case Channel::Shape: return "shape";
        case Channel::Vowels: return "vowels";
    }
    return "?";
}

Channel channel_from_name(std::string_view name) {
    for (Channel c : kAllChannels) {
        if (channel_name(c) == name) return c;
    }
    throw ConfigError("unknown channel name: \"" + std::string(name) + "\"");
}

ChannelSet parse_channels(std::string_view spec) {
    if (spec == "all") return ChannelSet::all();
    ChannelSet set;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t comma = spec.find(',', start);
        if (comma == std::string_view::npos) comma = spec.size();
        auto piece = spec.substr(start, comma - start);
        if (!piece.empty()) set.add(channel_from_name(piece));
        start = comma + 1;
    }
    if (set.empty()) throw ConfigError("no channels selected");
    return set;
}

std::string channels_to_string(ChannelSet set) {
    if (set == ChannelSet::all()) return "all";
    std::string out;
    for (Channel c : kAllChannels) {
        if (!set.contains(c)) continue;
        if (!out.empty()) out += ',';
        out += channel_name(c);
    }
    return out;
}

FrequencyTable build_frequency_table(
    const Corpus& corpus, std::span<const std::size_t> user_indices) {
    FrequencyTable table;
    for (std::size_t idx : user_indices) {
        const auto& user = corpus.users[idx];
        for (const auto& tweet : user.tweets) {
            for (auto& token : tokenize(tweet)) {
                ++table.counts[std::move(token)];
            }
        }
        table.source_users.push_back(user.user_id);
    }
    std::sort(table.source_users.begin(), table.source_users.end());
    return table;
}

FrequencyTable build_frequency_table(const Corpus& corpus) {
    std::vector<std::size_t> all(corpus.users.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return build_frequency_table(corpus, all);
}

std::vector<std::string> tokenize(std::string_view text) {
    const auto cps = decode_utf8(text);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && is_whitespace(cps[i])) ++i;
        if (i >= cps.size()) break;
        std::string token;
        while (i < cps.size() && !is_whitespace(cps[i])) {
            append_utf8(token, cps[i]);
            ++i;
        }
        tokens.push_back(std::move(token));
    }
    return tokens;
}

std::string freq_bin(std::int64_t count) {
    if (count <= 0) return "0";
    int digits = 0;
    while (count > 0) {
        ++digits;
        count /= 10;
    }
    return std::to_string(digits);
}

std::vector<std::string> bleach_frequency(std::span<const std::string> tokens,
                                          const FrequencyTable& table) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& token : tokens) {
        out.push_back(freq_bin(table.lookup(token)));
    }
    return out;
}

std::vector<std::string> bleach_length(std::span<const std::string> tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& token : tokens) {
        out.push_back("0" + std::to_string(count_codepoints(token)));
    }
    return out;
}

std::string bleach_punct_c(std::string_view token) {
    const auto cps = decode_utf8(token);
    std::string out;
    bool in_word = false;
    for (char32_t cp : cps) {
        if (is_alphanumeric(cp)) {
            if (!in_word) out += 'W';
            in_word = true;
        } else {
            in_word = false;
            append_utf8(out, cp);
        }
    }
    return out;
}

std::string bleach_punct_a(std::string_view token) {
    const auto cps = decode_utf8(token);
    std::string out;
    std::size_t i = 0;
    bool in_word = false;
    while (i < cps.size()) {
        std::size_t consumed = 0;
        if (emoji_at(cps, i, consumed)) {
            out += 'J';
            i += consumed;
            in_word = false;
            continue;
        }
        if (!is_alphanumeric(cps[i])) {
            if (std::size_t len = emoticon_match(cps, i); len > 0) {
                out += 'E';
                i += len;
                in_word = false;
                continue;
            }
            out += 'P';
            ++i;
            in_word = false;
            continue;
        }
        if (!in_word) out += 'W';
        in_word = true;
        ++i;
    }
    return out;
}

std::string bleach_shape(std::string_view token) {
    const auto cps = decode_utf8(token);
    std::string out;
    char prev = 0;
    int run = 0;
    for (char32_t cp : cps) {
        char cls = 'X';
        if (is_uppercase(cp)) {
            cls = 'U';
        } else if (is_lowercase(cp)) {
            cls = 'L';
        } else if (is_digit(cp)) {
            cls = 'D';
        }
        run = (cls == prev) ? run + 1 : 1;
        prev = cls;
        if (run <= 2) out += cls;
    }
    return out;
}

std::string bleach_vowels(std::string_view token) {
    const auto cps = decode_utf8(token);
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        const char32_t low = (cp < 0x80) ? cp | 0x20 : cp;
        if (low == U'a' || low == U'e' || low == U'i' || low == U'o' ||
            low == U'u') {
            out += 'V';
        } else if (is_letter(cp)) {
            out += 'C';
        } else {
            out += 'O';
        }
    }
    return out;
}

BleachedDoc bleach_document(std::span<const std::string> tweets,
                            ChannelSet channels, const FrequencyTable* table) {
    if (channels.contains(Channel::Frequency) && table == nullptr) {
        throw ConfigError(
            "frequency channel requested without a frequency table");
    }
    BleachedDoc doc;
    doc.channels = channels;

    auto out = [&](Channel c) -> std::vector<std::string>& {
        return doc.tokens[static_cast<std::size_t>(c)];
    };
    const std::string boundary(kTweetBoundary);

    bool first = true;
    for (const auto& tweet : tweets) {
        if (!first) {
            for (Channel c : kAllChannels) {
                if (channels.contains(c)) out(c).push_back(boundary);
            }
        }
        first = false;
        const auto tokens = tokenize(tweet);
        if (channels.contains(Channel::Frequency)) {
            auto bins = bleach_frequency(tokens, *table);
            auto& dst = out(Channel::Frequency);
            dst.insert(dst.end(), std::make_move_iterator(bins.begin()),
                       std::make_move_iterator(bins.end()));
        }
        if (channels.contains(Channel::Length)) {
            auto lens = bleach_length(tokens);
            auto& dst = out(Channel::Length);
            dst.insert(dst.end(), std::make_move_iterator(lens.begin()),
                       std::make_move_iterator(lens.end()));
        }
        for (const auto& token : tokens) {
            // The USER/URL placeholders keep their surface form in the punct
            // channels so mention and link patterns stay visible there.
            const bool placeholder = token == kUserToken || token == kUrlToken;
            if (channels.contains(Channel::PunctC)) {
                out(Channel::PunctC)
                    .push_back(placeholder ? token : bleach_punct_c(token));
            }
            if (channels.contains(Channel::PunctA)) {
                out(Channel::PunctA)
                    .push_back(placeholder ? token : bleach_punct_a(token));
            }
            if (channels.contains(Channel::Shape)) {
                out(Channel::Shape).push_back(bleach_shape(token));
            }
            if (channels.contains(Channel::Vowels)) {
                out(Channel::Vowels).push_back(bleach_vowels(token));
            }
        }
    }
    return doc;
}

}  // namespace textbleach
