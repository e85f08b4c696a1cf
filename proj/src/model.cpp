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

#include "lexsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lexsim/error.hpp"

namespace lexsim {

namespace {

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

double dot_norm_scaled(std::span<const float> u, std::span<const float> v, double norm_u,
                       double norm_v) {
    if (norm_u == 0.0 || norm_v == 0.0) return 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += static_cast<double>(u[i]) * static_cast<double>(v[i]);
    }
    return clamp_unit(dot / (norm_u * norm_v));
}

std::vector<double> score_all(const EmbeddingModel &model, WordId query, bool parallel) {
    const auto norms = model.norms();
    const auto q = model.vector(query);
    const auto n = static_cast<std::int64_t>(model.size());
    std::vector<double> scores(model.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto id = static_cast<WordId>(i);
        scores[i] = dot_norm_scaled(q, model.vector(id), norms[query], norms[id]);
    }
    return scores;
}

std::vector<Neighbor> top_k(const EmbeddingModel &model, WordId query,
                            const std::vector<double> &scores, std::size_t k) {
    std::vector<WordId> ids;
    ids.reserve(model.size());
    for (WordId id = 0; id < model.size(); ++id) {
        if (id != query) ids.push_back(id);
    }
    const std::size_t take = std::min(k, ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(),
                      [&](WordId a, WordId b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });
    std::vector<Neighbor> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back({model.vocab().word(ids[i]), ids[i], scores[ids[i]]});
    }
    return out;
}

WordId require_word(const EmbeddingModel &model, std::string_view word, std::size_t k) {
    if (k < 1) throw ValidationError("k must be >= 1");
    const auto id = model.vocab().find(word);
    if (!id) throw UnknownWordError(std::string(word));
    return *id;
}

}  // namespace

namespace {

template <class T>
double cosine_impl(std::span<const T> u, std::span<const T> v) {
    if (u.size() != v.size()) throw ValidationError("cosine: vector size mismatch");
    double dot = 0.0;
    double uu = 0.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u[i];
        const double b = v[i];
        dot += a * b;
        uu += a * a;
        vv += b * b;
    }
    if (uu == 0.0 || vv == 0.0) throw ValidationError("cosine: zero-norm vector");
    return clamp_unit(dot / (std::sqrt(uu) * std::sqrt(vv)));
}

}  // namespace

double cosine(std::span<const float> u, std::span<const float> v) { return cosine_impl(u, v); }

double cosine(std::span<const double> u, std::span<const double> v) { return cosine_impl(u, v); }

EmbeddingModel::EmbeddingModel(Vocabulary vocab, std::vector<float> vectors, std::size_t dim)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)), dim_(dim),
      norms_(std::make_shared<NormCache>()) {
    if (dim_ == 0) throw ValidationError("model dimension must be >= 1");
    if (vectors_.size() != vocab_.size() * dim_) {
        throw ValidationError("model has " + std::to_string(vectors_.size()) +
                              " components, expected " + std::to_string(vocab_.size() * dim_));
    }
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        if (!std::isfinite(vectors_[i])) {
            throw ValidationError("non-finite component in vector of '" +
                                  vocab_.word(static_cast<WordId>(i / dim_)) + "'");
        }
    }
}

std::optional<std::span<const float>> EmbeddingModel::lookup(std::string_view word) const {
    const auto id = vocab_.find(word);
    if (!id) return std::nullopt;
    return vector(*id);
}

std::span<const double> EmbeddingModel::norms() const {
    std::call_once(norms_->once, [this] {
        auto &values = norms_->values;
        values.resize(size());
        for (WordId id = 0; id < size(); ++id) {
            const auto v = vector(id);
            double sq = 0.0;
            for (float x : v) sq += static_cast<double>(x) * static_cast<double>(x);
            values[id] = std::sqrt(sq);
        }
    });
    return norms_->values;
}

std::optional<double> similarity(const EmbeddingModel &model, std::string_view word1,
                                 std::string_view word2) {
    const auto a = model.lookup(word1);
    const auto b = model.lookup(word2);
    if (!a || !b) return std::nullopt;
    const auto norms = model.norms();
    const auto id1 = *model.vocab().find(word1);
    const auto id2 = *model.vocab().find(word2);
    // Canonical argument order keeps the result exactly symmetric.
    if (id2 < id1) return dot_norm_scaled(*b, *a, norms[id2], norms[id1]);
    return dot_norm_scaled(*a, *b, norms[id1], norms[id2]);
}

std::vector<Neighbor> nearest(const EmbeddingModel &model, std::string_view word, std::size_t k) {
    const WordId query = require_word(model, word, k);
    return top_k(model, query, score_all(model, query, true), k);
}

std::vector<Neighbor> nearest_reference(const EmbeddingModel &model, std::string_view word,
                                        std::size_t k) {
    const WordId query = require_word(model, word, k);
    std::vector<Neighbor> all;
    for (WordId id = 0; id < model.size(); ++id) {
        if (id == query) continue;
        double score = 0.0;
        try {
            score = cosine(model.vector(query), model.vector(id));
        } catch (const ValidationError &) {
            score = 0.0;  // zero vector
        }
        all.push_back({model.vocab().word(id), id, score});
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const Neighbor &a, const Neighbor &b) { return a.score > b.score; });
    all.resize(std::min(k, all.size()));
    return all;
}

}  // namespace lexsim
