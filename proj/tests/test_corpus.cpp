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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "textbleach/corpus.hpp"
#include "textbleach/error.hpp"

using namespace textbleach;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

Corpus tiny_corpus(int f_users, int m_users) {
    Corpus c;
    c.language = "xx";
    for (int i = 0; i < f_users + m_users; ++i) {
        UserRecord u;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "u%03d", i);
        u.user_id = buf;
        u.gender = i < f_users ? Gender::F : Gender::M;
        u.tweets = {"hello world", "second tweet", "third one"};
        u.language = "xx";
        c.users.push_back(u);
    }
    return c;
}

}  // namespace

TEST_CASE("normalize mentions and urls") {
    CHECK(normalize_text("@user hi") == "USER hi");
    CHECK(normalize_text("hi @user") == "hi USER");
    CHECK(normalize_text("see http://x.co now") == "see URL now");
    CHECK(normalize_text("see https://example.com/a?b=1") == "see URL");
    CHECK(normalize_text("@a @b") == "USER USER");
}

TEST_CASE("normalize leaves plain text alone") {
    CHECK(normalize_text("no handles here") == "no handles here");
    // '@' not at token start is not a mention
    CHECK(normalize_text("email me@example.com") == "email me@example.com");
    // a bare scheme with nothing after it is not a url
    CHECK(normalize_text("http://") == "http://");
    CHECK(normalize_text("") == "");
}

TEST_CASE("normalize is idempotent") {
    for (const char* s :
         {"@user hi", "see http://x.co", "USER URL", "plain", "a @b http://c.d"}) {
        std::string once = normalize_text(s);
        CHECK(normalize_text(once) == once);
    }
}

TEST_CASE("load corpus happy path") {
    fs::path path = write_temp(
        "tb_corpus_ok.jsonl",
        R"({"user_id":"u1","gender":"F","tweets":["hi @bob","second"]})"
        "\n"
        R"({"user_id":"u2","gender":"M","tweets":["see http://x.co"]})"
        "\n");
    Corpus c = load_corpus(path, "nl");
    REQUIRE(c.users.size() == 2);
    CHECK(c.language == "nl");
    CHECK(c.users[0].user_id == "u1");
    CHECK(c.users[0].gender == Gender::F);
    CHECK(c.users[0].language == "nl");
    // normalization happens on load
    CHECK(c.users[0].tweets[0] == "hi USER");
    CHECK(c.users[1].tweets[0] == "see URL");
    CHECK(c.count(Gender::F) == 1);
    CHECK(c.count(Gender::M) == 1);
}

TEST_CASE("save and reload round trip") {
    Corpus c = tiny_corpus(2, 2);
    fs::path path = fs::temp_directory_path() / "tb_corpus_rt.jsonl";
    save_corpus(c, path);
    Corpus back = load_corpus(path, "xx");
    REQUIRE(back.users.size() == c.users.size());
    for (std::size_t i = 0; i < c.users.size(); ++i) {
        CHECK(back.users[i].user_id == c.users[i].user_id);
        CHECK(back.users[i].gender == c.users[i].gender);
        CHECK(back.users[i].tweets == c.users[i].tweets);
    }
}

TEST_CASE("load corpus error kinds") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/nope.jsonl", "xx"), IoError);

    fs::path bad_json = write_temp("tb_corpus_bad.jsonl", "not json\n");
    CHECK_THROWS_AS(load_corpus(bad_json, "xx"), ParseError);
    try {
        load_corpus(bad_json, "xx");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }

    fs::path bad_gender = write_temp(
        "tb_corpus_gender.jsonl",
        R"({"user_id":"u1","gender":"Q","tweets":["x"]})" "\n");
    CHECK_THROWS_AS(load_corpus(bad_gender, "xx"), ValidationError);

    fs::path dup = write_temp(
        "tb_corpus_dup.jsonl",
        R"({"user_id":"u1","gender":"F","tweets":["x"]})" "\n"
        R"({"user_id":"u1","gender":"M","tweets":["y"]})" "\n");
    CHECK_THROWS_AS(load_corpus(dup, "xx"), ValidationError);

    fs::path missing = write_temp(
        "tb_corpus_missing.jsonl", R"({"user_id":"u1","gender":"F"})" "\n");
    CHECK_THROWS_AS(load_corpus(missing, "xx"), ParseError);
}

TEST_CASE("balance downsample") {
    Corpus c = tiny_corpus(7, 3);
    Corpus b = balance_downsample(c, 42);
    CHECK(b.count(Gender::F) == 3);
    CHECK(b.count(Gender::M) == 3);
    REQUIRE(b.users.size() == 6);

    // survivors keep corpus order
    std::size_t last = 0;
    bool first = true;
    for (const UserRecord& u : b.users) {
        std::size_t pos = 0;
        for (; pos < c.users.size(); ++pos) {
            if (c.users[pos].user_id == u.user_id) break;
        }
        REQUIRE(pos < c.users.size());
        if (!first) CHECK(pos > last);
        last = pos;
        first = false;
    }

    // deterministic per seed, and the seed matters
    Corpus b2 = balance_downsample(c, 42);
    REQUIRE(b2.users.size() == b.users.size());
    for (std::size_t i = 0; i < b.users.size(); ++i) {
        CHECK(b2.users[i].user_id == b.users[i].user_id);
    }
    bool any_diff = false;
    for (std::uint64_t seed = 0; seed < 20 && !any_diff; ++seed) {
        Corpus other = balance_downsample(c, seed);
        for (std::size_t i = 0; i < other.users.size(); ++i) {
            if (other.users[i].user_id != b.users[i].user_id) any_diff = true;
        }
    }
    CHECK(any_diff);

    // already balanced corpora pass through unchanged
    Corpus even = tiny_corpus(2, 2);
    Corpus same = balance_downsample(even, 7);
    CHECK(same.users.size() == 4);
}

TEST_CASE("cap tweets") {
    Corpus c = tiny_corpus(1, 1);
    Corpus capped = cap_tweets(c, 2);
    CHECK(capped.users[0].tweets.size() == 2);
    CHECK(capped.users[0].tweets[0] == "hello world");
    CHECK(capped.users[0].tweets[1] == "second tweet");
    Corpus wide = cap_tweets(c, 100);
    CHECK(wide.users[0].tweets.size() == 3);
    CHECK_THROWS_AS(cap_tweets(c, 0), ValidationError);
}

TEST_CASE("stratified kfold") {
    Corpus c = tiny_corpus(10, 10);
    auto folds = stratified_kfold(c, 5, 42);
    REQUIRE(folds.size() == 5);

    std::set<std::size_t> seen;
    for (const FoldSplit& f : folds) {
        // per-fold gender balance within one
        int fs = 0, ms = 0;
        for (std::size_t idx : f.test) {
            (c.users[idx].gender == Gender::F ? fs : ms)++;
            CHECK(seen.insert(idx).second);  // test sets partition the users
        }
        CHECK(std::abs(fs - ms) <= 1);
        // train and test are disjoint and cover everything
        std::set<std::size_t> all(f.train.begin(), f.train.end());
        for (std::size_t idx : f.test) {
            CHECK(all.find(idx) == all.end());
            all.insert(idx);
        }
        CHECK(all.size() == c.users.size());
        // indices ascend
        CHECK(std::is_sorted(f.train.begin(), f.train.end()));
        CHECK(std::is_sorted(f.test.begin(), f.test.end()));
    }
    CHECK(seen.size() == c.users.size());

    // deterministic
    auto again = stratified_kfold(c, 5, 42);
    for (std::size_t i = 0; i < folds.size(); ++i) {
        CHECK(again[i].test == folds[i].test);
        CHECK(again[i].train == folds[i].train);
    }

    CHECK_THROWS_AS(stratified_kfold(c, 1, 42), ValidationError);
    CHECK_THROWS_AS(stratified_kfold(c, 11, 42), ValidationError);
}
