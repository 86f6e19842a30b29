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

#include "textbleach/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <string_view>

#include "textbleach/bleach.hpp"
#include "textbleach/error.hpp"
#include "textbleach/hash.hpp"
#include "textbleach/rng.hpp"

namespace textbleach {

namespace {

const std::array<SynthLanguage, 3> kLanguages = {{
    {"xa", "bdgvz", {"\U0001F4A5", "\U0001F52B", "\U0001F602"}, "!"},
    {"xb", "klmnp", {"\U0001F60D", "\U0001F525", "\U0001F64C"}, "¡"},
    {"xc", "rstfc", {"\U0001F389", "\U0001F49C", "\U0001F63B"}, "~"},
}};

// Tokens shared verbatim across all pseudo-languages; planted at the same
// rate for both genders so they carry no signal, but they give embedding
// vocabularies a non-empty intersection.
const std::array<std::string, 8> kNumerals = {
    "5", "12", "42", "77", "100", "360", "2020", "9"};

constexpr std::size_t kLexiconSize = 120;

// CV and CVCV words enumerated in a fixed order; every word contains a
// language-unique consonant, so lexicons are disjoint across languages.
std::vector<std::string> build_lexicon(const SynthLanguage& lang) {
    static constexpr std::string_view kVowels = "aeiou";
    std::vector<std::string> words;
    words.reserve(kLexiconSize);
    for (char c : lang.consonants) {
        for (char v : kVowels) {
            words.push_back(std::string{c, v});
            if (words.size() == kLexiconSize) return words;
        }
    }
    for (char c1 : lang.consonants) {
        for (char v1 : kVowels) {
            for (char c2 : lang.consonants) {
                for (char v2 : kVowels) {
                    words.push_back(std::string{c1, v1, c2, v2});
                    if (words.size() == kLexiconSize) return words;
                }
            }
        }
    }
    return words;
}

// Zipf-ish sampler: rank r drawn with weight 1/(r+1).
class ZipfSampler {
public:
    explicit ZipfSampler(std::size_t n) {
        cumulative_.reserve(n);
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            total += 1.0 / static_cast<double>(r + 1);
            cumulative_.push_back(total);
        }
    }
    std::size_t draw(Rng& rng) const {
        double u = rng.uniform() * cumulative_.back();
        auto it =
            std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        return static_cast<std::size_t>(it - cumulative_.begin());
    }

private:
    std::vector<double> cumulative_;
};

std::string emoji_run(const SynthLanguage& lang, Rng& rng) {
    std::string out;
    std::uint64_t len = 1 + rng.below(2);
    for (std::uint64_t i = 0; i < len; ++i) {
        out += lang.emojis[rng.below(lang.emojis.size())];
    }
    return out;
}

std::string bang_run(const SynthLanguage& lang, Rng& rng) {
    std::string out;
    std::uint64_t len = 1 + rng.below(3);
    for (std::uint64_t i = 0; i < len; ++i) out += lang.bang;
    return out;
}

}  // namespace

std::span<const SynthLanguage> synth_languages() { return kLanguages; }

const SynthLanguage& synth_language(const std::string& code) {
    for (const SynthLanguage& lang : kLanguages) {
        if (lang.code == code) return lang;
    }
    throw ValidationError("unknown synthetic language '" + code + "'");
}

Corpus synth_corpus(const SynthLanguage& lang, const SynthConfig& cfg) {
    if (cfg.users < 2 || cfg.users % 2 != 0) {
        throw ValidationError("users must be even and at least 2");
    }
    if (cfg.tweets < 1) throw ValidationError("tweets must be at least 1");

    const std::vector<std::string> lexicon = build_lexicon(lang);
    // InLanguage: the head of the lexicon splits into F-only and M-only
    // pools; the tail is shared. Pools use the same word templates, so word
    // identity (not shape or length) is the only lexical difference.
    constexpr std::size_t kPoolSize = 30;
    const std::size_t shared_begin =
        cfg.profile == SynthProfile::InLanguage ? 2 * kPoolSize : 0;
    ZipfSampler shared_sampler(lexicon.size() - shared_begin);
    ZipfSampler pool_sampler(kPoolSize);
    ZipfSampler numeral_sampler(kNumerals.size());

    Corpus corpus;
    corpus.language = lang.code;
    corpus.users.reserve(static_cast<std::size_t>(cfg.users));

    for (int u = 0; u < cfg.users; ++u) {
        UserRecord user;
        char idbuf[16];
        // ids carry the language code: cross-lingual runs must never see
        // the same user id on both sides of a train/test split
        std::snprintf(idbuf, sizeof(idbuf), "%su%04d", lang.code.c_str(), u);
        user.user_id = idbuf;
        user.gender = (u % 2 == 0) ? Gender::F : Gender::M;
        user.language = lang.code;
        const bool female = user.gender == Gender::F;

        Rng rng(fnv1a64(lang.code + ":" + user.user_id) ^
                (cfg.seed * 0x9E3779B97F4A7C15ull));

        double emoji_rate, bang_rate;
        if (cfg.profile == SynthProfile::CrossLingual) {
            emoji_rate = female ? 0.30 : 0.01;
            bang_rate = female ? 0.60 : 0.05;
        } else {
            emoji_rate = female ? 0.15 : 0.05;
            bang_rate = 0.0;
        }

        user.tweets.reserve(static_cast<std::size_t>(cfg.tweets));
        for (int t = 0; t < cfg.tweets; ++t) {
            std::string tweet;
            std::uint64_t slots = 6 + rng.below(5);
            for (std::uint64_t s = 0; s < slots; ++s) {
                if (!tweet.empty()) tweet += ' ';
                if (rng.uniform() < 0.02) {
                    tweet += kNumerals[numeral_sampler.draw(rng)];
                } else if (cfg.profile == SynthProfile::InLanguage &&
                           rng.uniform() < 0.30) {
                    std::size_t base = female ? 0 : kPoolSize;
                    tweet += lexicon[base + pool_sampler.draw(rng)];
                } else {
                    tweet += lexicon[shared_begin + shared_sampler.draw(rng)];
                }
                if (rng.uniform() < emoji_rate) {
                    tweet += ' ';
                    tweet += emoji_run(lang, rng);
                }
            }
            if (bang_rate > 0.0 && rng.uniform() < bang_rate) {
                tweet += ' ';
                tweet += bang_run(lang, rng);
            }
            user.tweets.push_back(std::move(tweet));
        }
        corpus.users.push_back(std::move(user));
    }
    return corpus;
}

Corpus synth_corpus(const std::string& code, const SynthConfig& cfg) {
    return synth_corpus(synth_language(code), cfg);
}

EmbeddingTable toy_embeddings(const Corpus& corpus, int dim,
                              std::uint64_t seed) {
    if (dim < 1) throw ValidationError("embedding dimension must be >= 1");
    if (corpus.users.empty()) throw ValidationError("empty corpus");

    EmbeddingTable table;
    table.dimension = dim;
    table.language = corpus.language;
    for (const UserRecord& user : corpus.users) {
        for (const std::string& tweet : user.tweets) {
            for (const std::string& token : tokenize(tweet)) {
                if (table.vectors.count(token)) continue;
                Rng rng(fnv1a64(token) ^ (seed * 0x9E3779B97F4A7C15ull));
                Eigen::VectorXd v(dim);
                for (int d = 0; d < dim; ++d) v[d] = 0.5 * rng.gaussian();
                table.vectors.emplace(token, std::move(v));
            }
        }
    }
    return table;
}

}  // namespace textbleach
