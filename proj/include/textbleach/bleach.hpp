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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textbleach/corpus.hpp"

namespace textbleach {

// The six abstract representations of a token stream.
enum class Channel : std::uint8_t {
    Frequency = 0,
    Length,
    PunctC,
    PunctA,
    Shape,
    Vowels,
};

inline constexpr int kChannelCount = 6;
inline constexpr std::array<Channel, kChannelCount> kAllChannels = {
    Channel::Frequency, Channel::Length, Channel::PunctC,
    Channel::PunctA,    Channel::Shape,  Channel::Vowels,
};

std::string_view channel_name(Channel c);          // "freq", "len", ...
Channel channel_from_name(std::string_view name);  // inverse, throws

// Small value-type set of channels.
class ChannelSet {
public:
    ChannelSet() = default;
    ChannelSet(std::initializer_list<Channel> cs) {
        for (Channel c : cs) add(c);
    }
    static ChannelSet all() {
        ChannelSet s;
        for (Channel c : kAllChannels) s.add(c);
        return s;
    }
    void add(Channel c) { bits_ |= mask(c); }
    bool contains(Channel c) const { return bits_ & mask(c); }
    bool empty() const { return bits_ == 0; }
    bool operator==(const ChannelSet&) const = default;

private:
    static std::uint8_t mask(Channel c) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
    }
    std::uint8_t bits_ = 0;
};

// Parses "freq,len,..." or "all"; throws ConfigError on unknown names.
ChannelSet parse_channels(std::string_view spec);
std::string channels_to_string(ChannelSet set);

// Token counts over the training split; unseen tokens look up as zero.
struct FrequencyTable {
    std::unordered_map<std::string, std::int64_t> counts;
    std::vector<std::string> source_users;  // provenance, sorted

    std::int64_t lookup(const std::string& token) const {
        auto it = counts.find(token);
        return it == counts.end() ? 0 : it->second;
    }
};

// Counts whitespace tokens of the given users' tweets.
FrequencyTable build_frequency_table(const Corpus& corpus,
                                     std::span<const std::size_t> user_indices);
FrequencyTable build_frequency_table(const Corpus& corpus);

// Splits on maximal runs of Unicode whitespace; never yields empty tokens.
std::vector<std::string> tokenize(std::string_view text);

// "0" for an unseen token, otherwise the number of decimal digits of the
// count (1-9 -> "1", 10-99 -> "2", ...): bins sized by order of magnitude.
std::string freq_bin(std::int64_t count);

std::vector<std::string> bleach_frequency(std::span<const std::string> tokens,
                                          const FrequencyTable& table);

// "0" + number of code points, so "a" -> "01" and a 12-char token -> "012".
std::vector<std::string> bleach_length(std::span<const std::string> tokens);

// Maximal alphanumeric runs collapse to one 'W'; everything else verbatim.
std::string bleach_punct_c(std::string_view token);

// Like punct_c but non-alphanumerics become classes: emoji code points 'J',
// emoticons 'E', the rest 'P'. Emoji beats emoticon beats 'P'; emoticon
// matches must start on a non-alphanumeric character.
std::string bleach_punct_a(std::string_view token);

// Uppercase 'U', lowercase 'L', digit 'D', other 'X'; runs of the same
// output character are condensed to at most two.
std::string bleach_shape(std::string_view token);

// ASCII aeiou (either case) 'V', other letters 'C', everything else 'O'.
std::string bleach_vowels(std::string_view token);

// Marker emitted between tweets in every channel of a bleached document.
inline constexpr std::string_view kTweetBoundary = "⟂";  // ⟂

// Normalization placeholders that pass through the punct channels verbatim.
inline constexpr std::string_view kUserToken = "USER";
inline constexpr std::string_view kUrlToken = "URL";

// One user document: per requested channel, one bleached token per input
// token, with kTweetBoundary separating consecutive tweets.
struct BleachedDoc {
    ChannelSet channels;
    std::array<std::vector<std::string>, kChannelCount> tokens;

    const std::vector<std::string>& channel(Channel c) const {
        return tokens[static_cast<std::size_t>(c)];
    }
};

// table may be null unless channels contains Frequency.
BleachedDoc bleach_document(std::span<const std::string> tweets,
                            ChannelSet channels,
                            const FrequencyTable* table = nullptr);

}  // namespace textbleach
