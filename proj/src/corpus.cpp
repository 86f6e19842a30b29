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

#include "textbleach/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "textbleach/error.hpp"
#include "textbleach/rng.hpp"
#include "textbleach/unicode.hpp"

namespace textbleach {

namespace {

bool is_word_char(char32_t cp) {
    return cp == U'_' || (cp >= U'0' && cp <= U'9') ||
           (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

bool starts_with(const std::vector<char32_t>& cps, std::size_t pos,
                 std::u32string_view prefix) {
    if (pos + prefix.size() > cps.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (cps[pos + i] != prefix[i]) return false;
    }
    return true;
}

// Rewrites one whitespace-free token span in place onto `out`.
void normalize_token(const std::vector<char32_t>& cps, std::size_t begin,
                     std::size_t end, std::string& out) {
    std::size_t i = begin;
    // Mention: '@' at token start followed by at least one word character.
    if (cps[i] == U'@' && i + 1 < end && is_word_char(cps[i + 1])) {
        std::size_t j = i + 1;
        while (j < end && is_word_char(cps[j])) ++j;
        out += "USER";
        i = j;
    } else if (starts_with(cps, i, U"www.") && i + 4 < end) {
        // Bare-domain url: leading "www." consumes the rest of the token.
        out += "URL";
        return;
    }
    // Scheme urls may start anywhere in the token and run to its end. The
    // scheme must be followed by at least one more character.
    for (std::size_t j = i; j < end; ++j) {
        const bool http = starts_with(cps, j, U"http://") && j + 7 < end;
        const bool https = starts_with(cps, j, U"https://") && j + 8 < end;
        if (http || https) {
            for (std::size_t k = i; k < j; ++k) append_utf8(out, cps[k]);
            out += "URL";
            return;
        }
    }
    for (std::size_t k = i; k < end; ++k) append_utf8(out, cps[k]);
}

}  // namespace

char gender_char(Gender g) { return g == Gender::F ? 'F' : 'M'; }

Gender gender_from_string(std::string_view s) {
    if (s == "F") return Gender::F;
    if (s == "M") return Gender::M;
    throw ValidationError("unknown gender value: \"" + std::string(s) + "\"");
}

std::size_t Corpus::count(Gender g) const {
    return static_cast<std::size_t>(
        std::count_if(users.begin(), users.end(),
                      [g](const UserRecord& u) { return u.gender == g; }));
}

std::string normalize_text(std::string_view raw) {
    const auto cps = decode_utf8(raw);
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < cps.size()) {
        if (is_whitespace(cps[i])) {
            append_utf8(out, cps[i]);
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < cps.size() && !is_whitespace(cps[j])) ++j;
        normalize_token(cps, i, j, out);
        i = j;
    }
    return out;
}

Corpus load_corpus(const std::filesystem::path& path, std::string language) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file: " + path.string());

    Corpus corpus;
    corpus.language = std::move(language);
    std::unordered_set<std::string> seen_ids;

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("malformed corpus line: ") + e.what(),
                             line_no);
        }
        if (!obj.is_object() || !obj.contains("user_id") ||
            !obj.contains("gender") || !obj.contains("tweets")) {
            throw ParseError("corpus line missing user_id/gender/tweets",
                             line_no);
        }
        UserRecord user;
        try {
            user.user_id = obj.at("user_id").get<std::string>();
            const auto gender_str = obj.at("gender").get<std::string>();
            if (gender_str != "F" && gender_str != "M") {
                throw ValidationError("unknown gender value \"" + gender_str +
                                      "\" at line " + std::to_string(line_no));
            }
            user.gender = gender_from_string(gender_str);
            for (const auto& t : obj.at("tweets")) {
                user.tweets.push_back(normalize_text(t.get<std::string>()));
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad field type: ") + e.what(),
                             line_no);
        }
        if (user.user_id.empty()) {
            throw ValidationError("empty user_id at line " +
                                  std::to_string(line_no));
        }
        if (user.tweets.empty()) {
            throw ValidationError("user \"" + user.user_id +
                                  "\" has no tweets (line " +
                                  std::to_string(line_no) + ")");
        }
        if (!seen_ids.insert(user.user_id).second) {
            throw ValidationError("duplicate user_id \"" + user.user_id +
                                  "\" at line " + std::to_string(line_no));
        }
        user.language = corpus.language;
        corpus.users.push_back(std::move(user));
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write corpus file: " + path.string());
    for (const auto& user : corpus.users) {
        nlohmann::json obj;
        obj["user_id"] = user.user_id;
        obj["gender"] = std::string(1, gender_char(user.gender));
        obj["tweets"] = user.tweets;
        out << obj.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

Corpus balance_downsample(const Corpus& corpus, std::uint64_t seed) {
    const std::size_t nf = corpus.count(Gender::F);
    const std::size_t nm = corpus.count(Gender::M);
    if (nf == 0 || nm == 0) {
        throw ValidationError("cannot balance: gender " +
                              std::string(1, nf == 0 ? 'F' : 'M') +
                              " has no users");
    }
    if (nf == nm) return corpus;

    const Gender majority = nf > nm ? Gender::F : Gender::M;
    const std::size_t keep = std::min(nf, nm);

    std::vector<std::size_t> majority_idx;
    for (std::size_t i = 0; i < corpus.users.size(); ++i) {
        if (corpus.users[i].gender == majority) majority_idx.push_back(i);
    }
    Rng rng(seed);
    rng.shuffle(majority_idx);
    majority_idx.resize(keep);
    std::sort(majority_idx.begin(), majority_idx.end());

    Corpus out;
    out.language = corpus.language;
    std::size_t next = 0;
    for (std::size_t i = 0; i < corpus.users.size(); ++i) {
        if (corpus.users[i].gender != majority) {
            out.users.push_back(corpus.users[i]);
        } else if (next < majority_idx.size() && majority_idx[next] == i) {
            out.users.push_back(corpus.users[i]);
            ++next;
        }
    }
    return out;
}

Corpus cap_tweets(const Corpus& corpus, int k) {
    if (k < 1) throw ValidationError("tweet cap must be >= 1");
    Corpus out;
    out.language = corpus.language;
    out.users.reserve(corpus.users.size());
    for (const auto& user : corpus.users) {
        UserRecord capped = user;
        if (capped.tweets.size() > static_cast<std::size_t>(k)) {
            capped.tweets.resize(static_cast<std::size_t>(k));
        }
        out.users.push_back(std::move(capped));
    }
    return out;
}

std::vector<FoldSplit> stratified_kfold(const Corpus& corpus, int k,
                                        std::uint64_t seed) {
    if (k < 2) throw ValidationError("k-fold requires k >= 2");
    std::vector<std::size_t> female, male;
    for (std::size_t i = 0; i < corpus.users.size(); ++i) {
        (corpus.users[i].gender == Gender::F ? female : male).push_back(i);
    }
    const auto kk = static_cast<std::size_t>(k);
    if (female.size() < kk || male.size() < kk) {
        throw ValidationError("each gender needs at least k=" +
                              std::to_string(k) + " users for k-fold");
    }
    Rng rng(seed);
    rng.shuffle(female);
    rng.shuffle(male);

    std::vector<FoldSplit> folds(kk);
    auto deal = [&](const std::vector<std::size_t>& group) {
        // Contiguous chunks whose sizes differ by at most one.
        std::size_t pos = 0;
        for (std::size_t f = 0; f < kk; ++f) {
            std::size_t size = group.size() / kk + (f < group.size() % kk);
            for (std::size_t j = 0; j < size; ++j) {
                folds[f].test.push_back(group[pos++]);
            }
        }
    };
    deal(female);
    deal(male);

    for (auto& fold : folds) {
        std::sort(fold.test.begin(), fold.test.end());
        std::vector<char> in_test(corpus.users.size(), 0);
        for (auto i : fold.test) in_test[i] = 1;
        for (std::size_t i = 0; i < corpus.users.size(); ++i) {
            if (!in_test[i]) fold.train.push_back(i);
        }
    }
    return folds;
}

}  // namespace textbleach
