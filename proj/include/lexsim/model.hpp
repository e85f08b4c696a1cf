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
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexsim/vocab.hpp"

namespace lexsim {

/// Cosine of two equally sized vectors, clamped to [-1, 1].
/// Throws ValidationError on a size mismatch or a zero-norm argument.
double cosine(std::span<const float> u, std::span<const float> v);
double cosine(std::span<const double> u, std::span<const double> v);

struct Neighbor {
    std::string word;
    WordId id = 0;
    double score = 0.0;
};

enum class ModelFormat { text, binary };

/// Immutable word -> vector store. Vectors are kept exactly as trained or
/// loaded; norms are computed on first use and shared between copies.
class EmbeddingModel {
public:
    /// `vectors` is row-major, vocab.size() x dim. Throws ValidationError on
    /// a shape mismatch or a non-finite component.
    EmbeddingModel(Vocabulary vocab, std::vector<float> vectors, std::size_t dim);

    std::size_t size() const noexcept { return vocab_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const Vocabulary &vocab() const noexcept { return vocab_; }
    std::span<const float> data() const noexcept { return vectors_; }

    std::span<const float> vector(WordId id) const {
        return {vectors_.data() + static_cast<std::size_t>(id) * dim_, dim_};
    }
    std::optional<std::span<const float>> lookup(std::string_view word) const;

    /// Euclidean norm of every row, computed once.
    std::span<const double> norms() const;

private:
    struct NormCache {
        std::once_flag once;
        std::vector<double> values;
    };

    Vocabulary vocab_;
    std::vector<float> vectors_;
    std::size_t dim_;
    std::shared_ptr<NormCache> norms_;
};

/// Cosine of two in-vocabulary words; nullopt when either word is unknown.
/// A zero vector is treated as orthogonal to everything (score 0).
std::optional<double> similarity(const EmbeddingModel &model, std::string_view word1,
                                 std::string_view word2);

/// Top-k words by cosine to `word`, excluding the word itself. Ties break by
/// ascending id. Returns min(k, V - 1) entries. OpenMP-parallel scan.
std::vector<Neighbor> nearest(const EmbeddingModel &model, std::string_view word, std::size_t k);

/// Serial reference for nearest(); same contract.
std::vector<Neighbor> nearest_reference(const EmbeddingModel &model, std::string_view word,
                                        std::size_t k);

/// Writes the interchange format. Text components use up to 9 significant
/// digits, so a float reads back exactly.
void save(const EmbeddingModel &model, const std::filesystem::path &path, ModelFormat format);

/// Reads either format, detected from the first record. Throws FormatError
/// (with line or byte position) on any malformed input; never returns a
/// partially read model.
EmbeddingModel load(const std::filesystem::path &path);
EmbeddingModel load_from_bytes(std::string_view bytes);

ModelFormat detect_format(std::string_view bytes);

}  // namespace lexsim
