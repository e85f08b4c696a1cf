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

// Pair similarity through an ordered model assembly.
//
// Models are tried in priority order; the first one that knows both words
// answers with its cosine (negatives clamped to 0). If none does, the
// longest-common-substring heuristic answers, when enabled:
//
//   L = longest shared contiguous run, in code points
//   score = L >= min_len ? min(1, L / divisor) : 0      (min_len 4, divisor 10)

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexsim/model.hpp"

namespace lexsim {

struct LcsMatch {
    std::size_t length = 0;  // code points
    std::string substring;   // first occurrence in the first word
};

/// Longest common contiguous substring of two UTF-8 strings, measured in
/// code points. Throws EncodingError on invalid UTF-8.
LcsMatch longest_common_substring(std::string_view a, std::string_view b);

inline constexpr std::size_t kDefaultLcsMinLength = 4;
inline constexpr double kDefaultLcsDivisor = 10.0;

double lcs_similarity(std::string_view a, std::string_view b,
                      std::size_t min_len = kDefaultLcsMinLength,
                      double divisor = kDefaultLcsDivisor);

/// Where a verdict came from: a model index, the string heuristic, or nothing.
class VerdictSource {
public:
    static VerdictSource model(std::size_t index) { return VerdictSource(Kind::model, index); }
    static VerdictSource lcs() { return VerdictSource(Kind::lcs, 0); }
    static VerdictSource none() { return VerdictSource(Kind::none, 0); }

    bool is_model() const noexcept { return kind_ == Kind::model; }
    bool is_lcs() const noexcept { return kind_ == Kind::lcs; }
    bool is_none() const noexcept { return kind_ == Kind::none; }
    std::size_t model_index() const noexcept { return index_; }

    /// "0", "1", ..., "lcs" or "none".
    std::string label() const;

    friend bool operator==(const VerdictSource &, const VerdictSource &) = default;

private:
    enum class Kind { model, lcs, none };
    VerdictSource(Kind kind, std::size_t index) : kind_(kind), index_(index) {}

    Kind kind_;
    std::size_t index_;
};

struct SimilarityVerdict {
    double score = 0.0;  // in [0, 1]
    VerdictSource source = VerdictSource::none();

    friend bool operator==(const SimilarityVerdict &, const SimilarityVerdict &) = default;
};

struct SourceCounts {
    std::vector<std::size_t> per_model;
    std::size_t lcs = 0;
    std::size_t none = 0;

    void add(const VerdictSource &source);
    std::size_t total() const;
    std::size_t model_total() const;

    friend bool operator==(const SourceCounts &, const SourceCounts &) = default;
};

struct CascadeOptions {
    bool lcs_enabled = false;
    std::size_t lcs_min_len = kDefaultLcsMinLength;
    double lcs_divisor = kDefaultLcsDivisor;
    /// Lowercase query words before lookup and string comparison, matching
    /// the corpus default.
    bool lowercase = true;
};

class SimilarityCascade {
public:
    /// Throws ValidationError when there are no models and LCS is disabled.
    SimilarityCascade(std::vector<std::shared_ptr<const EmbeddingModel>> models,
                      CascadeOptions options = {});

    /// Wraps one model without the string fallback.
    static SimilarityCascade single(std::shared_ptr<const EmbeddingModel> model);

    SimilarityVerdict similarity(std::string_view word1, std::string_view word2) const;

    std::size_t model_count() const noexcept { return models_.size(); }
    const EmbeddingModel &model(std::size_t i) const { return *models_[i]; }
    const CascadeOptions &options() const noexcept { return options_; }

private:
    std::vector<std::shared_ptr<const EmbeddingModel>> models_;
    CascadeOptions options_;
};

using WordPair = std::pair<std::string, std::string>;

struct BatchResult {
    std::vector<SimilarityVerdict> verdicts;
    SourceCounts counts;
};

/// Element-wise cascade similarity in input order (OpenMP-parallel).
BatchResult batch_similarity(const SimilarityCascade &cascade, std::span<const WordPair> pairs);

/// Serial reference for batch_similarity().
BatchResult batch_similarity_reference(const SimilarityCascade &cascade,
                                       std::span<const WordPair> pairs);

/// Cascade description read from a config file: one model path per line in
/// priority order, an optional final "lcs" line, '#' comments. Relative
/// paths resolve against the config file's directory.
struct CascadeSpec {
    std::vector<std::filesystem::path> model_paths;
    bool lcs = false;
};

CascadeSpec parse_cascade_config(std::string_view text, const std::filesystem::path &base_dir);
CascadeSpec read_cascade_config(const std::filesystem::path &path);

/// Loads every model named by the spec.
SimilarityCascade load_cascade(const CascadeSpec &spec, CascadeOptions options = {});

}  // namespace lexsim
