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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "textbleach/corpus.hpp"
#include "textbleach/embed.hpp"

namespace textbleach {

// A pseudo-language: its own consonant inventory (so lexicons never collide
// across languages), its own emoji inventory and exclamation character (so
// style markers share abstract shape but no surface form).
struct SynthLanguage {
    std::string code;
    std::string consonants;            // language-unique letters
    std::vector<std::string> emojis;   // Emoji_Presentation code points
    std::string bang;                  // exclamation-like punctuation
};

// The three built-in pseudo-languages: xa, xb, xc.
std::span<const SynthLanguage> synth_languages();
const SynthLanguage& synth_language(const std::string& code);

enum class SynthProfile {
    // Disjoint lexicons, no lexical gender signal; F plants style markers
    // (emoji after ~30% of tokens, terminal exclamation runs) with the same
    // abstract pattern in every language.
    CrossLingual,
    // Adds a strong lexical gender signal (disjoint F/M word pools) next to
    // a noisier style signal, so raw words beat abstract channels.
    InLanguage,
};

struct SynthConfig {
    SynthProfile profile = SynthProfile::CrossLingual;
    int users = 200;   // per language; must be even (balanced F/M)
    int tweets = 50;   // per user
    std::uint64_t seed = 42;
};

// Deterministic per (language, config); user streams are seeded per user id
// so corpora are stable under any generation order.
Corpus synth_corpus(const SynthLanguage& lang, const SynthConfig& cfg);
Corpus synth_corpus(const std::string& code, const SynthConfig& cfg);

// Random but deterministic word vectors for every token of the corpus; the
// same token maps to the same vector in every language, which gives the
// pseudo-dictionary (shared numerals) consistent anchors.
EmbeddingTable toy_embeddings(const Corpus& corpus, int dim,
                              std::uint64_t seed);

}  // namespace textbleach
