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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace textbleach {

enum class Gender : std::int8_t { F, M };

char gender_char(Gender g);
Gender gender_from_string(std::string_view s);  // "F" or "M" only

// Classifier label convention used throughout: F -> +1, M -> -1.
inline int gender_sign(Gender g) { return g == Gender::F ? +1 : -1; }

struct UserRecord {
    std::string user_id;
    Gender gender = Gender::F;
    std::vector<std::string> tweets;  // normalized, original order
    std::string language;             // ISO 639-1 style code
};

struct Corpus {
    std::string language;
    std::vector<UserRecord> users;

    std::size_t count(Gender g) const;
};

// Replaces @-mentions (at token start) with USER and urls with URL.
// Idempotent; any other character passes through unchanged.
std::string normalize_text(std::string_view raw);

// Loads a JSON-lines corpus: one {"user_id", "gender", "tweets"} object per
// line. Tweets are normalized on the way in. Rejects duplicate user ids,
// unknown gender values and malformed lines (with their line number).
Corpus load_corpus(const std::filesystem::path& path, std::string language);

// Writes a corpus back out in the same JSON-lines format.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Downsamples the majority gender so both counts equal the minority count.
// Survivors are picked uniformly at random (seeded); corpus order is kept.
Corpus balance_downsample(const Corpus& corpus, std::uint64_t seed);

// Keeps each user's first min(n, k) tweets.
Corpus cap_tweets(const Corpus& corpus, int k);

struct FoldSplit {
    std::vector<std::size_t> train;  // indices into corpus.users, ascending
    std::vector<std::size_t> test;
};

// Gender-stratified k-fold split; per-fold gender counts differ from perfect
// stratification by at most one. Deterministic for a fixed seed.
std::vector<FoldSplit> stratified_kfold(const Corpus& corpus, int k,
                                        std::uint64_t seed);

}  // namespace textbleach
