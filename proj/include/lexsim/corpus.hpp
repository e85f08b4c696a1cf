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

// Sentence streaming over pre-lemmatized, one-sentence-per-line text.
//
// Tokens are whitespace-delimited. Stop-words and sentences left with fewer
// than two tokens are dropped; the remaining sentences are the training
// units for the vocabulary builder and the trainer.

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace lexsim {

using Sentence = std::vector<std::string>;

struct TransparentStringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

using StopWords = std::unordered_set<std::string, TransparentStringHash, std::equal_to<>>;

struct CorpusConfig {
    std::vector<std::filesystem::path> paths;
    std::optional<std::filesystem::path> stopword_path;
    bool lowercase = true;

    void validate() const;
};

/// Reads one stop-word per line; blank lines are ignored.
StopWords load_stopwords(const std::filesystem::path &path, bool lowercase = true);

/// Splits `line` on ASCII whitespace, optionally lowercases, and removes
/// stop-words. The result may hold fewer than two tokens; callers decide.
Sentence tokenize_line(std::string_view line, const StopWords &stopwords, bool lowercase);

/// Single-pass, single-consumer reader over the configured files.
class SentenceStream {
public:
    SentenceStream(CorpusConfig config, const StopWords &stopwords);

    /// Next sentence with at least two tokens, or nullopt at end of input.
    std::optional<Sentence> next();

    const std::filesystem::path &current_file() const;
    std::size_t current_line() const noexcept { return line_no_; }

private:
    bool open_next_file();

    CorpusConfig config_;
    const StopWords &stopwords_;
    std::size_t file_index_ = 0;
    std::size_t line_no_ = 0;
    std::ifstream in_;
    bool open_ = false;
};

/// Replayable sentence producer: each call walks the whole corpus.
using SentenceVisitor = std::function<void(const Sentence &)>;
using SentenceSource = std::function<void(const SentenceVisitor &)>;

/// Source over files; stop-words are loaded from config.stopword_path.
SentenceSource file_source(const CorpusConfig &config);

/// Source over in-memory sentences (already filtered).
SentenceSource memory_source(std::vector<Sentence> sentences);

}  // namespace lexsim
