/*
 * Copyright 2026 The lexsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lexsim/corpus.hpp"

#include <algorithm>
#include <iterator>
#include <memory>
#include <utility>

#include "lexsim/error.hpp"
#include "lexsim/utf8.hpp"

namespace lexsim {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace

void CorpusConfig::validate() const {
    if (paths.empty()) throw ValidationError("corpus: at least one input path is required");
}

StopWords load_stopwords(const std::filesystem::path &path, bool lowercase) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open stop-word file " + path.string());
    const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw IoError("read failure in stop-word file " + path.string());
    if (const auto bad = utf8::find_invalid(data)) {
        throw EncodingError(path.string() + ": invalid UTF-8 at byte offset " + std::to_string(*bad),
                            *bad);
    }

    StopWords words;
    std::size_t start = 0;
    while (start <= data.size()) {
        auto end = data.find('\n', start);
        if (end == std::string::npos) end = data.size();
        const auto word = trim(std::string_view(data).substr(start, end - start));
        if (!word.empty()) words.emplace(lowercase ? utf8::to_lower(word) : std::string(word));
        start = end + 1;
    }
    return words;
}

Sentence tokenize_line(std::string_view line, const StopWords &stopwords, bool lowercase) {
    Sentence tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        const auto begin = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (i == begin) break;
        const auto raw = line.substr(begin, i - begin);
        std::string token = lowercase ? utf8::to_lower(raw) : std::string(raw);
        if (stopwords.find(token) == stopwords.end()) {
            tokens.push_back(std::move(token));
        }
    }
    return tokens;
}

SentenceStream::SentenceStream(CorpusConfig config, const StopWords &stopwords)
    : config_(std::move(config)), stopwords_(stopwords) {
    config_.validate();
}

const std::filesystem::path &SentenceStream::current_file() const {
    return config_.paths[std::min(file_index_, config_.paths.size() - 1)];
}

bool SentenceStream::open_next_file() {
    if (file_index_ >= config_.paths.size()) return false;
    in_ = std::ifstream(config_.paths[file_index_], std::ios::binary);
    if (!in_) throw IoError("cannot open corpus file " + config_.paths[file_index_].string());
    line_no_ = 0;
    open_ = true;
    return true;
}

std::optional<Sentence> SentenceStream::next() {
    std::string line;
    while (true) {
        if (!open_ && !open_next_file()) return std::nullopt;
        if (!std::getline(in_, line)) {
            if (in_.bad()) {
                open_ = false;
                file_index_ = config_.paths.size();
                throw IoError("read failure in " + current_file().string() + " after line " +
                              std::to_string(line_no_));
            }
            open_ = false;
            ++file_index_;
            continue;
        }
        ++line_no_;
        if (const auto bad = utf8::find_invalid(line)) {
            throw EncodingError(current_file().string() + ":" + std::to_string(line_no_) +
                                    ": invalid UTF-8 at byte offset " + std::to_string(*bad) +
                                    " of the line",
                                *bad);
        }
        auto tokens = tokenize_line(line, stopwords_, config_.lowercase);
        if (tokens.size() >= 2) return tokens;
    }
}

SentenceSource file_source(const CorpusConfig &config) {
    config.validate();
    auto stopwords = std::make_shared<StopWords>();
    if (config.stopword_path) *stopwords = load_stopwords(*config.stopword_path, config.lowercase);
    return [config, stopwords](const SentenceVisitor &visit) {
        SentenceStream stream(config, *stopwords);
        while (auto sentence = stream.next()) visit(*sentence);
    };
}

SentenceSource memory_source(std::vector<Sentence> sentences) {
    auto shared = std::make_shared<const std::vector<Sentence>>(std::move(sentences));
    return [shared](const SentenceVisitor &visit) {
        for (const auto &s : *shared) visit(s);
    };
}

}  // namespace lexsim
