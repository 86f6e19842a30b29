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
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "textbleach/bleach.hpp"
#include "textbleach/corpus.hpp"

namespace textbleach {

enum class FeatureMode : std::uint8_t { Lexical, Abstract };
enum class Weighting : std::uint8_t { Binary, TfIdf };

struct NgramRange {
    int lo = 1;
    int hi = 1;
    bool operator==(const NgramRange&) const = default;
};

// What to extract from a user document. Lexical mirrors the usual word 1-2
// plus char 3-6 gram setup; Abstract takes token 1-n grams per channel.
struct FeatureSpec {
    FeatureMode mode = FeatureMode::Abstract;
    NgramRange token_ngrams{1, 5};
    std::optional<NgramRange> char_ngrams;  // lexical mode only
    ChannelSet channels = ChannelSet::all();
    Weighting weighting = Weighting::TfIdf;

    static FeatureSpec lexical_defaults();
    static FeatureSpec abstract_defaults();

    void validate() const;  // throws ConfigError
    bool operator==(const FeatureSpec&) const = default;
};

// Multiset of namespaced grams ("shape|LL LL", "word|the cat", "char|ab ").
using GramCounts = std::unordered_map<std::string, std::int64_t>;

// Lexical grams of one document: token n-grams over the whitespace tokens
// plus character n-grams over the text itself (whitespace runs count as one
// space). Lexical text is lowercased first.
GramCounts extract_grams_lexical(std::string_view normalized_text,
                                 const FeatureSpec& spec);

// Abstract grams: token n-grams per requested channel, namespaced by the
// channel name. Throws ConfigError when the doc lacks a requested channel.
GramCounts extract_grams_abstract(const BleachedDoc& doc,
                                  const FeatureSpec& spec);

// Index space over namespaced feature strings, built from training docs
// only. Indices follow lexicographic feature order.
struct Vocabulary {
    std::vector<std::string> features;   // index -> feature string
    std::vector<std::int64_t> df;        // index -> document frequency
    std::unordered_map<std::string, std::int32_t> index;
    std::int64_t num_docs = 0;
    std::vector<std::string> source_users;  // provenance, sorted

    std::size_t size() const { return features.size(); }
    std::int32_t find(const std::string& feature) const {
        auto it = index.find(feature);
        return it == index.end() ? -1 : it->second;
    }
};

struct MinDfPolicy {
    std::int64_t default_min_df = 1;
    std::int64_t char_min_df = 2;  // lexical char grams explode otherwise

    std::int64_t for_feature(const std::string& feature) const {
        return feature.rfind("char|", 0) == 0 ? char_min_df : default_min_df;
    }
};

// Streaming vocabulary builder so gram multisets never have to be held for
// the whole corpus at once.
class VocabularyBuilder {
public:
    void add_document(const GramCounts& grams, const std::string& user_id);
    Vocabulary build(const MinDfPolicy& policy) const;

private:
    std::unordered_map<std::string, std::int64_t> df_;
    std::int64_t num_docs_ = 0;
    std::vector<std::string> users_;
};

Vocabulary build_vocabulary(std::span<const GramCounts> docs,
                            std::int64_t min_df);

// Sorted sparse vector; with TfIdf weighting nonzero vectors have unit norm.
struct SparseVector {
    std::vector<std::pair<std::int32_t, double>> entries;

    double norm() const;
    bool operator==(const SparseVector&) const = default;
};

// Binary: weight 1 per known gram. TfIdf: (1+ln tf) * (ln((1+N)/(1+df))+1),
// L2-normalized. Unknown grams are dropped.
SparseVector vectorize(const GramCounts& grams, const Vocabulary& vocab,
                       Weighting weighting);

// Fitted featurization state for one training split; applies uniformly to
// train and test users.
class Featurizer {
public:
    static Featurizer fit(const Corpus& corpus,
                          std::span<const std::size_t> train_indices,
                          const FeatureSpec& spec, const MinDfPolicy& policy);
    // Reassembles a featurizer from persisted model state.
    static Featurizer from_parts(FeatureSpec spec, Vocabulary vocab,
                                 std::optional<FrequencyTable> freq);

    GramCounts grams(const UserRecord& user) const;
    SparseVector transform(const UserRecord& user) const;

    const FeatureSpec& spec() const { return spec_; }
    const Vocabulary& vocabulary() const { return vocab_; }
    const std::optional<FrequencyTable>& frequency_table() const {
        return freq_;
    }

private:
    FeatureSpec spec_;
    Vocabulary vocab_;
    std::optional<FrequencyTable> freq_;
};

}  // namespace textbleach
