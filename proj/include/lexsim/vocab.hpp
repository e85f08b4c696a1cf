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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexsim/corpus.hpp"

namespace lexsim {

using WordId = std::uint32_t;

/// Raw word frequencies; per-shard counters merge associatively.
class VocabCounter {
public:
    void add(const Sentence &sentence);
    void add(std::string_view word, std::uint64_t n = 1);
    void merge(const VocabCounter &other);

    std::uint64_t raw_tokens() const noexcept { return raw_tokens_; }
    std::size_t distinct() const noexcept { return counts_.size(); }
    const auto &counts() const noexcept { return counts_; }

private:
    std::unordered_map<std::string, std::uint64_t, TransparentStringHash, std::equal_to<>> counts_;
    std::uint64_t raw_tokens_ = 0;
};

/// Frequency-sorted word list with dense ids. Ties in count are ordered
/// lexicographically (by UTF-8 bytes) so construction is deterministic.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Keeps every word with count >= min_count. Throws EmptyVocabularyError
    /// when nothing survives, ValidationError when min_count == 0.
    static Vocabulary build(const VocabCounter &counter, std::uint64_t min_count);
    static Vocabulary build(std::vector<std::pair<std::string, std::uint64_t>> counts,
                            std::uint64_t min_count, std::uint64_t raw_tokens);

    /// Vocabulary in the given order with unknown (zero) counts, as read back
    /// from an embedding file. Throws FormatError on duplicate words.
    static Vocabulary from_words(std::vector<std::string> words);

    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }

    const std::string &word(WordId id) const { return words_[id]; }
    std::uint64_t count(WordId id) const { return counts_[id]; }
    std::span<const std::string> words() const noexcept { return words_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }

    std::optional<WordId> find(std::string_view word) const;
    bool contains(std::string_view word) const { return find(word).has_value(); }

    /// Occurrences of retained words.
    std::uint64_t total_tokens() const noexcept { return total_tokens_; }
    /// Occurrences of all words before the min_count cut.
    std::uint64_t raw_tokens() const noexcept { return raw_tokens_; }

    /// "word<TAB>count" per line, in id order.
    void write_tsv(std::ostream &out) const;

    friend bool operator==(const Vocabulary &a, const Vocabulary &b) {
        return a.words_ == b.words_ && a.counts_ == b.counts_ &&
               a.total_tokens_ == b.total_tokens_ && a.raw_tokens_ == b.raw_tokens_;
    }

private:
    void index_words();

    std::vector<std::string> words_;
    std::vector<std::uint64_t> counts_;
    std::unordered_map<std::string, WordId, TransparentStringHash, std::equal_to<>> index_;
    std::uint64_t total_tokens_ = 0;
    std::uint64_t raw_tokens_ = 0;
};

Vocabulary build_vocab(const SentenceSource &sentences, std::uint64_t min_count);

inline constexpr double kDefaultTablePower = 0.75;
inline constexpr std::size_t kDefaultTableSize = 10'000'000;

/// Flat table of word ids whose slot shares follow count^power.
///
/// Slot allocation is largest-remainder rounding of table_size * p(w), with
/// every nonzero-weight word guaranteed at least one slot. Each word's slot
/// count is then within one slot of its exact share whenever that is
/// compatible with the one-slot minimum.
class NegativeSamplingTable {
public:
    NegativeSamplingTable(const Vocabulary &vocab, double power = kDefaultTablePower,
                          std::size_t table_size = kDefaultTableSize);
    NegativeSamplingTable(std::span<const std::uint64_t> counts, double power,
                          std::size_t table_size);

    std::size_t size() const noexcept { return entries_.size(); }
    WordId operator[](std::size_t slot) const { return entries_[slot]; }
    std::size_t slots(WordId id) const { return slot_counts_[id]; }
    /// Number of words holding at least one slot.
    std::size_t support() const noexcept { return support_; }

    template <class Rng>
    WordId draw(Rng &rng) const {
        std::uniform_int_distribution<std::size_t> pick(0, entries_.size() - 1);
        return entries_[pick(rng)];
    }

private:
    std::vector<WordId> entries_;
    std::vector<std::size_t> slot_counts_;
    std::size_t support_ = 0;
};

/// Keep probability for a word under frequent-word subsampling:
/// min(1, (sqrt(f / sample) + 1) * sample / f) with f = word_count / total_tokens.
/// sample == 0 disables subsampling and always returns 1.
double subsample_keep_prob(std::uint64_t word_count, std::uint64_t total_tokens, double sample);

}  // namespace lexsim
