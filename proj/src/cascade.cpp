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

#include "lexsim/cascade.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <numeric>

#include "lexsim/error.hpp"
#include "lexsim/utf8.hpp"

namespace lexsim {

LcsMatch longest_common_substring(std::string_view a, std::string_view b) {
    const auto ua = utf8::decode(a);
    const auto ub = utf8::decode(b);
    LcsMatch best;
    if (ua.empty() || ub.empty()) return best;

    // run[j + 1] = length of the common run ending at ua[i], ub[j].
    std::vector<std::size_t> prev(ub.size() + 1, 0), cur(ub.size() + 1, 0);
    std::size_t best_end = 0;  // exclusive end in ua
    for (std::size_t i = 0; i < ua.size(); ++i) {
        for (std::size_t j = 0; j < ub.size(); ++j) {
            cur[j + 1] = ua[i] == ub[j] ? prev[j] + 1 : 0;
            if (cur[j + 1] > best.length) {
                best.length = cur[j + 1];
                best_end = i + 1;
            }
        }
        std::swap(prev, cur);
    }
    best.substring = utf8::encode(
        std::u32string_view(ua).substr(best_end - best.length, best.length));
    return best;
}

double lcs_similarity(std::string_view a, std::string_view b, std::size_t min_len,
                      double divisor) {
    if (!(divisor > 0.0)) throw ValidationError("lcs divisor must be > 0");
    const auto match = longest_common_substring(a, b);
    if (match.length == 0 || match.length < min_len) return 0.0;
    return std::min(1.0, static_cast<double>(match.length) / divisor);
}

std::string VerdictSource::label() const {
    switch (kind_) {
    case Kind::model:
        return std::to_string(index_);
    case Kind::lcs:
        return "lcs";
    case Kind::none:
        break;
    }
    return "none";
}

void SourceCounts::add(const VerdictSource &source) {
    if (source.is_model()) {
        if (per_model.size() <= source.model_index()) per_model.resize(source.model_index() + 1, 0);
        ++per_model[source.model_index()];
    } else if (source.is_lcs()) {
        ++lcs;
    } else {
        ++none;
    }
}

std::size_t SourceCounts::model_total() const {
    return std::accumulate(per_model.begin(), per_model.end(), std::size_t{0});
}

std::size_t SourceCounts::total() const { return model_total() + lcs + none; }

SimilarityCascade::SimilarityCascade(std::vector<std::shared_ptr<const EmbeddingModel>> models,
                                     CascadeOptions options)
    : models_(std::move(models)), options_(options) {
    if (models_.empty() && !options_.lcs_enabled) {
        throw ValidationError("cascade needs at least one model or the lcs fallback");
    }
    for (const auto &m : models_) {
        if (!m) throw ValidationError("cascade model is null");
    }
    if (options_.lcs_enabled && !(options_.lcs_divisor > 0.0)) {
        throw ValidationError("lcs divisor must be > 0");
    }
}

SimilarityCascade SimilarityCascade::single(std::shared_ptr<const EmbeddingModel> model) {
    return SimilarityCascade({std::move(model)}, CascadeOptions{});
}

SimilarityVerdict SimilarityCascade::similarity(std::string_view word1,
                                                std::string_view word2) const {
    std::string lower1, lower2;
    if (options_.lowercase) {
        lower1 = utf8::to_lower(word1);
        lower2 = utf8::to_lower(word2);
        word1 = lower1;
        word2 = lower2;
    }
    for (std::size_t i = 0; i < models_.size(); ++i) {
        if (const auto cos = lexsim::similarity(*models_[i], word1, word2)) {
            return {std::max(0.0, *cos), VerdictSource::model(i)};
        }
    }
    if (options_.lcs_enabled) {
        return {lcs_similarity(word1, word2, options_.lcs_min_len, options_.lcs_divisor),
                VerdictSource::lcs()};
    }
    return {0.0, VerdictSource::none()};
}

BatchResult batch_similarity(const SimilarityCascade &cascade, std::span<const WordPair> pairs) {
    BatchResult result;
    result.verdicts.resize(pairs.size());
    const auto n = static_cast<std::int64_t>(pairs.size());
    // Nothing may throw inside the parallel region: validate encodings and
    // fill the norm caches first.
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::string_view w : {std::string_view(pairs[i].first), std::string_view(pairs[i].second)}) {
            if (const auto bad = utf8::find_invalid(w)) {
                throw EncodingError("pair " + std::to_string(i + 1) +
                                        ": invalid UTF-8 at byte offset " + std::to_string(*bad),
                                    *bad);
            }
        }
    }
    for (std::size_t m = 0; m < cascade.model_count(); ++m) cascade.model(m).norms();
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
        result.verdicts[i] = cascade.similarity(pairs[i].first, pairs[i].second);
    }
    result.counts.per_model.assign(cascade.model_count(), 0);
    for (const auto &v : result.verdicts) result.counts.add(v.source);
    return result;
}

BatchResult batch_similarity_reference(const SimilarityCascade &cascade,
                                       std::span<const WordPair> pairs) {
    BatchResult result;
    result.counts.per_model.assign(cascade.model_count(), 0);
    for (const auto &[w1, w2] : pairs) {
        result.verdicts.push_back(cascade.similarity(w1, w2));
        result.counts.add(result.verdicts.back().source);
    }
    return result;
}

CascadeSpec parse_cascade_config(std::string_view text, const std::filesystem::path &base_dir) {
    CascadeSpec spec;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.remove_suffix(1);
        }
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
        if (line.empty() || line.front() == '#') continue;
        if (spec.lcs) {
            throw FormatError("cascade config line " + std::to_string(line_no) +
                              ": \"lcs\" must be the last entry");
        }
        if (line == "lcs") {
            spec.lcs = true;
            continue;
        }
        std::filesystem::path p{std::string(line)};
        spec.model_paths.push_back(p.is_relative() ? base_dir / p : p);
    }
    if (spec.model_paths.empty() && !spec.lcs) {
        throw FormatError("cascade config lists no models and no lcs fallback");
    }
    return spec;
}

CascadeSpec read_cascade_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open cascade config " + path.string());
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_cascade_config(text, path.parent_path());
}

SimilarityCascade load_cascade(const CascadeSpec &spec, CascadeOptions options) {
    std::vector<std::shared_ptr<const EmbeddingModel>> models;
    models.reserve(spec.model_paths.size());
    for (const auto &p : spec.model_paths) {
        models.push_back(std::make_shared<const EmbeddingModel>(load(p)));
    }
    options.lcs_enabled = spec.lcs;
    return SimilarityCascade(std::move(models), options);
}

}  // namespace lexsim
