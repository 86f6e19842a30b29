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

#include "textbleach/features.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include "textbleach/error.hpp"
#include "textbleach/unicode.hpp"

namespace textbleach {

FeatureSpec FeatureSpec::lexical_defaults() {
    FeatureSpec spec;
    spec.mode = FeatureMode::Lexical;
    spec.token_ngrams = {1, 2};
    spec.char_ngrams = NgramRange{3, 6};
    spec.channels = ChannelSet{};
    spec.weighting = Weighting::TfIdf;
    return spec;
}

FeatureSpec FeatureSpec::abstract_defaults() {
    FeatureSpec spec;
    spec.mode = FeatureMode::Abstract;
    spec.token_ngrams = {1, 5};
    spec.char_ngrams.reset();
    spec.channels = ChannelSet::all();
    spec.weighting = Weighting::TfIdf;
    return spec;
}

void FeatureSpec::validate() const {
    auto check_range = [](const NgramRange& r, std::string_view what) {
        if (r.lo < 1 || r.hi < r.lo) {
            throw ConfigError(std::string("bad ") + std::string(what) +
                              " n-gram range [" + std::to_string(r.lo) + "," +
                              std::to_string(r.hi) + "]");
        }
    };
    check_range(token_ngrams, "token");
    if (char_ngrams) check_range(*char_ngrams, "char");
    if (mode == FeatureMode::Abstract) {
        if (channels.empty()) {
            throw ConfigError("abstract features need at least one channel");
        }
        if (char_ngrams) {
            throw ConfigError("char n-grams only apply to lexical features");
        }
    } else if (!channels.empty()) {
        throw ConfigError("lexical features take no channels");
    }
}

namespace {

void add_token_ngrams(std::span<const std::string> tokens,
                      const NgramRange& range, std::string_view ns,
                      GramCounts& out) {
    std::string gram;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        gram.assign(ns);
        gram += '|';
        for (int n = 1; n <= range.hi; ++n) {
            std::size_t j = i + static_cast<std::size_t>(n) - 1;
            if (j >= tokens.size()) break;
            if (n > 1) gram += ' ';
            gram += tokens[j];
            if (n >= range.lo) ++out[gram];
        }
    }
}

void add_char_ngrams(std::span<const std::string> tokens,
                     const NgramRange& range, GramCounts& out) {
    // Character stream = tokens joined by single spaces, so any whitespace
    // run in the source counts as one space.
    std::vector<char32_t> cps;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) cps.push_back(U' ');
        std::vector<char32_t> tok = decode_utf8(tokens[i]);
        cps.insert(cps.end(), tok.begin(), tok.end());
    }
    std::string gram;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        gram.assign("char|");
        for (int n = 1; n <= range.hi; ++n) {
            std::size_t j = i + static_cast<std::size_t>(n) - 1;
            if (j >= cps.size()) break;
            append_utf8(gram, cps[j]);
            if (n >= range.lo) ++out[gram];
        }
    }
}

}  // namespace

GramCounts extract_grams_lexical(std::string_view normalized_text,
                                 const FeatureSpec& spec) {
    GramCounts out;
    std::string lowered = utf8_to_lower(normalized_text);
    std::vector<std::string> tokens = tokenize(lowered);
    add_token_ngrams(tokens, spec.token_ngrams, "word", out);
    if (spec.char_ngrams) add_char_ngrams(tokens, *spec.char_ngrams, out);
    return out;
}

GramCounts extract_grams_abstract(const BleachedDoc& doc,
                                  const FeatureSpec& spec) {
    GramCounts out;
    for (Channel c : kAllChannels) {
        if (!spec.channels.contains(c)) continue;
        if (!doc.channels.contains(c)) {
            throw ConfigError(std::string("document lacks channel ") +
                              std::string(channel_name(c)));
        }
        add_token_ngrams(doc.channel(c), spec.token_ngrams, channel_name(c),
                         out);
    }
    return out;
}

void VocabularyBuilder::add_document(const GramCounts& grams,
                                     const std::string& user_id) {
    for (const auto& [gram, count] : grams) {
        (void)count;
        ++df_[gram];
    }
    ++num_docs_;
    users_.push_back(user_id);
}

Vocabulary VocabularyBuilder::build(const MinDfPolicy& policy) const {
    if (num_docs_ == 0) throw ValidationError("empty training set");
    if (policy.default_min_df < 1 || policy.char_min_df < 1) {
        throw ValidationError("min_df must be at least 1");
    }
    Vocabulary vocab;
    vocab.num_docs = num_docs_;
    vocab.source_users = users_;
    std::sort(vocab.source_users.begin(), vocab.source_users.end());
    vocab.features.reserve(df_.size());
    for (const auto& [gram, df] : df_) {
        if (df >= policy.for_feature(gram)) vocab.features.push_back(gram);
    }
    std::sort(vocab.features.begin(), vocab.features.end());
    vocab.df.resize(vocab.features.size());
    vocab.index.reserve(vocab.features.size());
    for (std::size_t i = 0; i < vocab.features.size(); ++i) {
        vocab.df[i] = df_.at(vocab.features[i]);
        vocab.index.emplace(vocab.features[i],
                            static_cast<std::int32_t>(i));
    }
    return vocab;
}

Vocabulary build_vocabulary(std::span<const GramCounts> docs,
                            std::int64_t min_df) {
    VocabularyBuilder builder;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        builder.add_document(docs[i], "doc" + std::to_string(i));
    }
    MinDfPolicy policy;
    policy.default_min_df = min_df;
    policy.char_min_df = std::max<std::int64_t>(min_df, 2);
    return builder.build(policy);
}

double SparseVector::norm() const {
    double s = 0.0;
    for (const auto& [idx, w] : entries) {
        (void)idx;
        s += w * w;
    }
    return std::sqrt(s);
}

SparseVector vectorize(const GramCounts& grams, const Vocabulary& vocab,
                       Weighting weighting) {
    SparseVector vec;
    vec.entries.reserve(grams.size());
    for (const auto& [gram, tf] : grams) {
        std::int32_t idx = vocab.find(gram);
        if (idx < 0) continue;
        double w = 1.0;
        if (weighting == Weighting::TfIdf) {
            double idf = std::log(
                             (1.0 + static_cast<double>(vocab.num_docs)) /
                             (1.0 + static_cast<double>(vocab.df[idx]))) +
                         1.0;
            w = (1.0 + std::log(static_cast<double>(tf))) * idf;
        }
        vec.entries.emplace_back(idx, w);
    }
    std::sort(vec.entries.begin(), vec.entries.end());
    if (weighting == Weighting::TfIdf) {
        double n = vec.norm();
        if (n > 0.0) {
            for (auto& [idx, w] : vec.entries) {
                (void)idx;
                w /= n;
            }
        }
    }
    return vec;
}

Featurizer Featurizer::fit(const Corpus& corpus,
                           std::span<const std::size_t> train_indices,
                           const FeatureSpec& spec,
                           const MinDfPolicy& policy) {
    spec.validate();
    Featurizer f;
    f.spec_ = spec;
    if (spec.mode == FeatureMode::Abstract &&
        spec.channels.contains(Channel::Frequency)) {
        f.freq_ = build_frequency_table(corpus, train_indices);
    }
    VocabularyBuilder builder;
    for (std::size_t idx : train_indices) {
        if (idx >= corpus.users.size()) {
            throw ValidationError("train index out of range: " +
                                  std::to_string(idx));
        }
        const UserRecord& user = corpus.users[idx];
        builder.add_document(f.grams(user), user.user_id);
    }
    f.vocab_ = builder.build(policy);
    return f;
}

Featurizer Featurizer::from_parts(FeatureSpec spec, Vocabulary vocab,
                                  std::optional<FrequencyTable> freq) {
    spec.validate();
    if (spec.mode == FeatureMode::Abstract &&
        spec.channels.contains(Channel::Frequency) && !freq) {
        throw ConfigError("frequency channel needs a frequency table");
    }
    Featurizer f;
    f.spec_ = std::move(spec);
    f.vocab_ = std::move(vocab);
    f.freq_ = std::move(freq);
    return f;
}

GramCounts Featurizer::grams(const UserRecord& user) const {
    if (spec_.mode == FeatureMode::Lexical) {
        // One document per user: tweets joined by a newline, which the
        // whitespace tokenizer treats as an ordinary token boundary.
        std::string joined;
        for (std::size_t i = 0; i < user.tweets.size(); ++i) {
            if (i > 0) joined += '\n';
            joined += user.tweets[i];
        }
        return extract_grams_lexical(joined, spec_);
    }
    BleachedDoc doc = bleach_document(user.tweets, spec_.channels,
                                      freq_ ? &*freq_ : nullptr);
    return extract_grams_abstract(doc, spec_);
}

SparseVector Featurizer::transform(const UserRecord& user) const {
    return vectorize(grams(user), vocab_, spec_.weighting);
}

}  // namespace textbleach
