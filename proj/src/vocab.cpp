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

#include "lexsim/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lexsim/error.hpp"

namespace lexsim {

void VocabCounter::add(const Sentence &sentence) {
    for (const auto &w : sentence) add(w);
}

void VocabCounter::add(std::string_view word, std::uint64_t n) {
    auto it = counts_.find(word);
    if (it == counts_.end()) {
        counts_.emplace(std::string(word), n);
    } else {
        it->second += n;
    }
    raw_tokens_ += n;
}

void VocabCounter::merge(const VocabCounter &other) {
    for (const auto &[word, n] : other.counts_) {
        auto it = counts_.find(word);
        if (it == counts_.end()) {
            counts_.emplace(word, n);
        } else {
            it->second += n;
        }
    }
    raw_tokens_ += other.raw_tokens_;
}

Vocabulary Vocabulary::build(const VocabCounter &counter, std::uint64_t min_count) {
    std::vector<std::pair<std::string, std::uint64_t>> counts(counter.counts().begin(),
                                                              counter.counts().end());
    return build(std::move(counts), min_count, counter.raw_tokens());
}

Vocabulary Vocabulary::build(std::vector<std::pair<std::string, std::uint64_t>> counts,
                             std::uint64_t min_count, std::uint64_t raw_tokens) {
    if (min_count == 0) throw ValidationError("min_count must be >= 1");
    std::erase_if(counts, [&](const auto &p) { return p.second < min_count; });
    if (counts.empty()) throw EmptyVocabularyError();

    std::sort(counts.begin(), counts.end(), [](const auto &a, const auto &b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary v;
    v.words_.reserve(counts.size());
    v.counts_.reserve(counts.size());
    for (auto &[word, n] : counts) {
        v.words_.push_back(std::move(word));
        v.counts_.push_back(n);
        v.total_tokens_ += n;
    }
    v.raw_tokens_ = raw_tokens;
    v.index_words();
    return v;
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words) {
    Vocabulary v;
    v.words_ = std::move(words);
    v.counts_.assign(v.words_.size(), 0);
    v.index_words();
    if (v.index_.size() != v.words_.size()) {
        for (std::size_t i = 0; i < v.words_.size(); ++i) {
            if (v.index_.at(v.words_[i]) != i) {
                throw FormatError("duplicate word '" + v.words_[i] + "' at position " +
                                  std::to_string(i));
            }
        }
    }
    return v;
}

void Vocabulary::index_words() {
    if (words_.size() > std::numeric_limits<WordId>::max()) {
        throw ValidationError("vocabulary too large for 32-bit word ids");
    }
    index_.clear();
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        index_.emplace(words_[i], static_cast<WordId>(i));
    }
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
    const auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void Vocabulary::write_tsv(std::ostream &out) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        out << words_[i] << '\t' << counts_[i] << '\n';
    }
}

Vocabulary build_vocab(const SentenceSource &sentences, std::uint64_t min_count) {
    if (min_count == 0) throw ValidationError("min_count must be >= 1");
    VocabCounter counter;
    sentences([&](const Sentence &s) { counter.add(s); });
    return Vocabulary::build(counter, min_count);
}

NegativeSamplingTable::NegativeSamplingTable(const Vocabulary &vocab, double power,
                                             std::size_t table_size)
    : NegativeSamplingTable(vocab.counts(), power, table_size) {}

NegativeSamplingTable::NegativeSamplingTable(std::span<const std::uint64_t> counts, double power,
                                             std::size_t table_size) {
    const std::size_t n_words = counts.size();
    if (n_words == 0) throw EmptyVocabularyError("negative sampling table over empty vocabulary");
    if (!(power > 0.0 && power <= 1.0)) throw ValidationError("table power must be in (0, 1]");
    if (table_size < n_words) throw ValidationError("table size must be >= vocabulary size");

    std::vector<double> weight(n_words);
    double total = 0.0;
    for (std::size_t i = 0; i < n_words; ++i) {
        weight[i] = counts[i] == 0 ? 0.0 : std::pow(static_cast<double>(counts[i]), power);
        total += weight[i];
    }
    if (total <= 0.0) throw ValidationError("negative sampling table needs a nonzero count");

    std::vector<double> exact(n_words);
    slot_counts_.assign(n_words, 0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n_words; ++i) {
        exact[i] = static_cast<double>(table_size) * weight[i] / total;
        auto n = static_cast<std::size_t>(std::floor(exact[i]));
        if (weight[i] > 0.0 && n == 0) n = 1;
        slot_counts_[i] = n;
        assigned += n;
    }

    std::vector<std::size_t> order(n_words);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto remainder = [&](std::size_t i) { return exact[i] - static_cast<double>(slot_counts_[i]); };

    if (assigned < table_size) {
        std::erase_if(order, [&](std::size_t i) { return weight[i] == 0.0; });
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return remainder(a) > remainder(b); });
        for (std::size_t k = 0; assigned < table_size; k = (k + 1) % order.size()) {
            ++slot_counts_[order[k]];
            ++assigned;
        }
    } else if (assigned > table_size) {
        // Only reachable when many words were bumped to their one-slot minimum.
        std::erase_if(order, [&](std::size_t i) { return slot_counts_[i] <= 1; });
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return remainder(a) < remainder(b); });
        while (assigned > table_size) {
            bool progressed = false;
            for (auto i : order) {
                if (assigned == table_size) break;
                if (slot_counts_[i] > 1) {
                    --slot_counts_[i];
                    --assigned;
                    progressed = true;
                }
            }
            if (!progressed) throw ValidationError("table size too small for vocabulary");
        }
    }

    entries_.reserve(table_size);
    for (std::size_t i = 0; i < n_words; ++i) {
        entries_.insert(entries_.end(), slot_counts_[i], static_cast<WordId>(i));
        if (slot_counts_[i] > 0) ++support_;
    }
}

double subsample_keep_prob(std::uint64_t word_count, std::uint64_t total_tokens, double sample) {
    if (sample < 0.0) throw ValidationError("sample must be >= 0");
    if (sample == 0.0) return 1.0;
    if (total_tokens == 0) throw ValidationError("total_tokens must be > 0");
    if (word_count == 0) return 1.0;
    const double f = static_cast<double>(word_count) / static_cast<double>(total_tokens);
    return std::min(1.0, (std::sqrt(f / sample) + 1.0) * sample / f);
}

}  // namespace lexsim
