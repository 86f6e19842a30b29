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

#include <cmath>
#include <string>
#include <vector>

#include "textbleach/error.hpp"
#include "textbleach/features.hpp"

using namespace textbleach;

namespace {

FeatureSpec word_only(int lo, int hi) {
    FeatureSpec spec;
    spec.mode = FeatureMode::Lexical;
    spec.token_ngrams = {lo, hi};
    spec.char_ngrams.reset();
    spec.channels = ChannelSet{};
    return spec;
}

FeatureSpec char_only(int lo, int hi) {
    FeatureSpec spec = word_only(1, 1);
    spec.token_ngrams = {1, 1};
    spec.char_ngrams = NgramRange{lo, hi};
    return spec;
}

}  // namespace

TEST_CASE("word n-grams") {
    GramCounts g = extract_grams_lexical("the cat the", word_only(1, 2));
    CHECK(g["word|the"] == 2);
    CHECK(g["word|cat"] == 1);
    CHECK(g["word|the cat"] == 1);
    CHECK(g["word|cat the"] == 1);
    CHECK(g.count("word|the cat the") == 0);  // 3-gram not requested
    CHECK(g.size() == 4);
}

TEST_CASE("lexical text is lowercased") {
    GramCounts g = extract_grams_lexical("The CAT", word_only(1, 1));
    CHECK(g["word|the"] == 1);
    CHECK(g["word|cat"] == 1);
    CHECK(g.count("word|The") == 0);
}

TEST_CASE("char n-grams run over space-joined tokens") {
    GramCounts g = extract_grams_lexical("ab c", char_only(3, 3));
    CHECK(g["char|ab "] == 1);
    CHECK(g["char|b c"] == 1);
    // whitespace runs collapse to a single space in the char stream
    GramCounts g2 = extract_grams_lexical("ab \t c", char_only(3, 3));
    CHECK(g2 == g);
    // multibyte characters count as single positions
    GramCounts g3 = extract_grams_lexical("héé", char_only(3, 3));
    CHECK(g3["char|héé"] == 1);
    CHECK(g3.size() == 2);  // plus the word|héé unigram
}

TEST_CASE("abstract grams are namespaced per channel") {
    FeatureSpec spec = FeatureSpec::abstract_defaults();
    spec.token_ngrams = {1, 2};
    std::vector<std::string> tweets = {"hi there!", "yo"};
    FrequencyTable table;
    table.counts["hi"] = 12;
    BleachedDoc doc = bleach_document(tweets, spec.channels, &table);

    GramCounts g = extract_grams_abstract(doc, spec);
    CHECK(g["shape|LL"] == 2);          // "hi" and "yo"
    CHECK(g["freq|2"] == 1);
    CHECK(g["freq|0"] == 2);
    CHECK(g["len|02"] == 2);
    CHECK(g["puncta|WP"] == 1);         // "there!"
    CHECK(g["vowels|CV"] == 2);         // "hi" and "yo"
    // bigrams cross the tweet boundary, boundary token included
    CHECK(g["shape|LLX ⟂"] == 1);       // "there!" then the boundary
    CHECK(g["shape|⟂ LL"] == 1);
    CHECK(g.count("shape|hi") == 0);
}

TEST_CASE("abstract extraction wants matching channels") {
    FeatureSpec spec = FeatureSpec::abstract_defaults();
    std::vector<std::string> tweets = {"hi"};
    BleachedDoc doc = bleach_document(tweets, {Channel::Shape}, nullptr);
    CHECK_THROWS_AS(extract_grams_abstract(doc, spec), ConfigError);

    FeatureSpec shape_spec = FeatureSpec::abstract_defaults();
    shape_spec.channels = {Channel::Shape};
    GramCounts g = extract_grams_abstract(doc, shape_spec);
    CHECK(g["shape|LL"] == 1);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(word_only(0, 2).validate(), ConfigError);
    CHECK_THROWS_AS(word_only(3, 2).validate(), ConfigError);
    FeatureSpec no_channels = FeatureSpec::abstract_defaults();
    no_channels.channels = ChannelSet{};
    CHECK_THROWS_AS(no_channels.validate(), ConfigError);
    FeatureSpec abstract_chars = FeatureSpec::abstract_defaults();
    abstract_chars.char_ngrams = NgramRange{3, 6};
    CHECK_THROWS_AS(abstract_chars.validate(), ConfigError);
    CHECK_NOTHROW(FeatureSpec::lexical_defaults().validate());
    CHECK_NOTHROW(FeatureSpec::abstract_defaults().validate());
}

TEST_CASE("defaults") {
    FeatureSpec lex = FeatureSpec::lexical_defaults();
    CHECK(lex.token_ngrams == NgramRange{1, 2});
    REQUIRE(lex.char_ngrams.has_value());
    CHECK(*lex.char_ngrams == NgramRange{3, 6});
    FeatureSpec abs = FeatureSpec::abstract_defaults();
    CHECK(abs.token_ngrams == NgramRange{1, 5});
    CHECK(abs.channels == ChannelSet::all());
}

TEST_CASE("vocabulary is lexicographic with df counts") {
    GramCounts d1{{"word|b", 2}, {"word|a", 1}};
    GramCounts d2{{"word|b", 1}, {"word|c", 5}};
    std::vector<GramCounts> docs{d1, d2};
    Vocabulary v = build_vocabulary(docs, 1);
    REQUIRE(v.size() == 3);
    CHECK(v.features == std::vector<std::string>{"word|a", "word|b", "word|c"});
    CHECK(v.df == std::vector<std::int64_t>{1, 2, 1});
    CHECK(v.num_docs == 2);
    CHECK(v.find("word|b") == 1);
    CHECK(v.find("word|zzz") == -1);

    Vocabulary v2 = build_vocabulary(docs, 2);
    REQUIRE(v2.size() == 1);
    CHECK(v2.features[0] == "word|b");

    std::vector<GramCounts> none;
    CHECK_THROWS_AS(build_vocabulary(none, 1), ValidationError);
    CHECK_THROWS_AS(build_vocabulary(docs, 0), ValidationError);
}

TEST_CASE("char grams get their own min-df") {
    VocabularyBuilder b;
    b.add_document({{"char|abc", 1}, {"word|abc", 1}}, "u1");
    b.add_document({{"word|xyz", 1}}, "u2");
    MinDfPolicy policy;  // default 1, char 2
    Vocabulary v = b.build(policy);
    CHECK(v.find("char|abc") == -1);  // df 1 < 2
    CHECK(v.find("word|abc") != -1);
    CHECK(v.find("word|xyz") != -1);
    CHECK(v.source_users == std::vector<std::string>{"u1", "u2"});
}

TEST_CASE("tf-idf weights match the hand computation") {
    // two docs; g1 appears in both (tf 2 in doc1), g2 only in doc1
    GramCounts d1{{"word|g1", 2}, {"word|g2", 1}};
    GramCounts d2{{"word|g1", 1}};
    std::vector<GramCounts> docs{d1, d2};
    Vocabulary v = build_vocabulary(docs, 1);

    const double w1 = 1.0 + std::log(2.0);        // idf(g1) = ln(3/3)+1 = 1
    const double w2 = std::log(1.5) + 1.0;        // tf 1 -> factor 1
    CHECK(w1 == doctest::Approx(1.6931471805599454).epsilon(1e-12));
    CHECK(w2 == doctest::Approx(1.4054651081081644).epsilon(1e-12));
    const double norm = std::hypot(w1, w2);

    SparseVector vec = vectorize(d1, v, Weighting::TfIdf);
    REQUIRE(vec.entries.size() == 2);
    CHECK(vec.entries[0].first == v.find("word|g1"));
    CHECK(vec.entries[0].second == doctest::Approx(w1 / norm).epsilon(1e-12));
    CHECK(vec.entries[1].second == doctest::Approx(w2 / norm).epsilon(1e-12));
    CHECK(vec.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("binary weighting is unnormalized presence") {
    GramCounts d1{{"word|a", 3}, {"word|b", 1}};
    std::vector<GramCounts> docs{d1};
    Vocabulary v = build_vocabulary(docs, 1);
    SparseVector vec = vectorize(d1, v, Weighting::Binary);
    REQUIRE(vec.entries.size() == 2);
    CHECK(vec.entries[0].second == 1.0);
    CHECK(vec.entries[1].second == 1.0);
}

TEST_CASE("unknown grams are dropped") {
    GramCounts d1{{"word|a", 1}};
    std::vector<GramCounts> docs{d1};
    Vocabulary v = build_vocabulary(docs, 1);
    GramCounts query{{"word|a", 1}, {"word|unseen", 4}};
    SparseVector vec = vectorize(query, v, Weighting::TfIdf);
    CHECK(vec.entries.size() == 1);
}

TEST_CASE("featurizer fits train users only") {
    Corpus c;
    c.language = "xx";
    c.users.push_back({"u1", Gender::F, {"aaa bbb"}, "xx"});
    c.users.push_back({"u2", Gender::M, {"ccc ddd"}, "xx"});
    c.users.push_back({"u3", Gender::F, {"eee fff"}, "xx"});

    std::vector<std::size_t> train = {0, 1};
    FeatureSpec spec = FeatureSpec::abstract_defaults();
    spec.token_ngrams = {1, 1};
    Featurizer f = Featurizer::fit(c, train, spec, MinDfPolicy{});

    CHECK(f.vocabulary().source_users ==
          std::vector<std::string>{"u1", "u2"});
    REQUIRE(f.frequency_table().has_value());
    CHECK(f.frequency_table()->lookup("aaa") == 1);
    CHECK(f.frequency_table()->lookup("eee") == 0);  // u3 is held out

    // test-user transform only sees training vocabulary
    SparseVector held_out = f.transform(c.users[2]);
    for (const auto& [idx, w] : held_out.entries) {
        CHECK(idx >= 0);
        CHECK(idx < std::int32_t(f.vocabulary().size()));
        CHECK(w > 0.0);
    }

    // lexical featurizers skip the frequency table
    Featurizer lex =
        Featurizer::fit(c, train, FeatureSpec::lexical_defaults(),
                        MinDfPolicy{});
    CHECK_FALSE(lex.frequency_table().has_value());
}

TEST_CASE("featurizer reassembles from parts") {
    Corpus c;
    c.language = "xx";
    c.users.push_back({"u1", Gender::F, {"aa bb", "cc"}, "xx"});
    c.users.push_back({"u2", Gender::M, {"dd ee"}, "xx"});
    std::vector<std::size_t> train = {0, 1};
    FeatureSpec spec = FeatureSpec::abstract_defaults();
    Featurizer f = Featurizer::fit(c, train, spec, MinDfPolicy{});

    Featurizer g = Featurizer::from_parts(f.spec(), f.vocabulary(),
                                          f.frequency_table());
    for (const UserRecord& u : c.users) {
        CHECK(g.transform(u) == f.transform(u));
    }
}

TEST_CASE("lexical tweet seams behave like token boundaries") {
    // tweets join into one document; the char stream re-joins the tokens
    // with single spaces, so the seam looks like any token gap
    Corpus c;
    c.language = "xx";
    c.users.push_back({"u1", Gender::F, {"xa", "bx"}, "xx"});
    std::vector<std::size_t> train = {0};
    FeatureSpec spec = word_only(1, 2);
    spec.char_ngrams = NgramRange{3, 3};
    Featurizer f = Featurizer::fit(c, train, spec,
                                   MinDfPolicy{.default_min_df = 1,
                                               .char_min_df = 1});
    GramCounts g = f.grams(c.users[0]);
    CHECK(g.count("char|a b") == 1);
    CHECK(g.count("char|a\nb") == 0);
    // word bigrams span the seam
    CHECK(g.count("word|xa bx") == 1);
}
