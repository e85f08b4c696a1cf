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

#include "lexsim/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "lexsim/error.hpp"
#include "lexsim/utf8.hpp"

namespace lexsim {

namespace {

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

bool parse_double(std::string_view s, double &out) {
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::string to_string(DatasetKind kind) {
    return kind == DatasetKind::graded ? "graded" : "binary";
}

DatasetKind parse_dataset_kind(std::string_view name) {
    if (name == "graded") return DatasetKind::graded;
    if (name == "binary") return DatasetKind::binary;
    throw ValidationError("unknown dataset kind '" + std::string(name) +
                          "' (expected graded or binary)");
}

PairDataset parse_dataset(std::string_view text, DatasetKind kind) {
    PairDataset ds;
    ds.kind = kind;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos || line.front() == '#') {
            continue;
        }
        const std::string where = "dataset line " + std::to_string(line_no);
        if (const auto bad = utf8::find_invalid(line)) {
            throw EncodingError(where + ": invalid UTF-8 at byte offset " + std::to_string(*bad),
                                *bad);
        }

        std::vector<std::string_view> fields;
        std::size_t f = 0;
        while (true) {
            const auto tab = line.find('\t', f);
            fields.push_back(line.substr(f, tab == std::string_view::npos ? tab : tab - f));
            if (tab == std::string_view::npos) break;
            f = tab + 1;
        }
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
            throw FormatError(where + ": expected \"word1<TAB>word2<TAB>gold\"");
        }
        double gold = 0.0;
        if (!parse_double(fields[2], gold) || !std::isfinite(gold)) {
            throw FormatError(where + ": gold value '" + std::string(fields[2]) +
                              "' is not a number");
        }
        if (kind == DatasetKind::binary && gold != 0.0 && gold != 1.0) {
            throw ValidationError(where + ": binary dataset gold must be 0 or 1, got " +
                                  std::string(fields[2]));
        }
        if (kind == DatasetKind::graded && (gold < 0.0 || gold > 1.0)) {
            throw ValidationError(where + ": graded dataset gold must lie in [0, 1], got " +
                                  std::string(fields[2]));
        }
        ds.entries.push_back({std::string(fields[0]), std::string(fields[1]), gold});
    }
    if (ds.entries.empty()) throw FormatError("empty dataset");
    return ds;
}

PairDataset load_dataset(const std::filesystem::path &path, DatasetKind kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset " + path.string());
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    try {
        return parse_dataset(text, kind);
    } catch (const FormatError &e) {
        throw FormatError(path.string() + ": " + e.what());
    } catch (const ValidationError &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::vector<double> fractional_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        // Positions i..j-1 share 1-based ranks i+1..j.
        const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean_rank;
        i = j;
    }
    return ranks;
}

double spearman(std::span<const double> gold, std::span<const double> predicted) {
    if (gold.size() != predicted.size()) throw MetricError("spearman: length mismatch");
    if (gold.size() < 2) throw MetricError("spearman: need at least two items");
    auto is_constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    if (is_constant(gold)) throw MetricError("spearman: gold scores are constant");
    if (is_constant(predicted)) throw MetricError("spearman: predicted scores are constant");

    const auto rg = fractional_ranks(gold);
    const auto rp = fractional_ranks(predicted);
    const double n = static_cast<double>(rg.size());
    const double mg = std::accumulate(rg.begin(), rg.end(), 0.0) / n;
    const double mp = std::accumulate(rp.begin(), rp.end(), 0.0) / n;
    double cov = 0.0, vg = 0.0, vp = 0.0;
    for (std::size_t i = 0; i < rg.size(); ++i) {
        cov += (rg[i] - mg) * (rp[i] - mp);
        vg += (rg[i] - mg) * (rg[i] - mg);
        vp += (rp[i] - mp) * (rp[i] - mp);
    }
    return std::clamp(cov / std::sqrt(vg * vp), -1.0, 1.0);
}

double average_precision(std::span<const int> labels, std::span<const double> scores) {
    if (labels.size() != scores.size()) throw MetricError("average_precision: length mismatch");
    for (int l : labels) {
        if (l != 0 && l != 1) throw MetricError("average_precision: labels must be 0 or 1");
    }
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        if (labels[order[rank]] == 1) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
        }
    }
    if (hits == 0) throw MetricError("average_precision: no positive labels");
    return sum / static_cast<double>(hits);
}

EvalReport evaluate(const SimilarityCascade &scorer, const PairDataset &dataset) {
    if (dataset.entries.empty()) throw FormatError("empty dataset");
    std::vector<WordPair> pairs;
    pairs.reserve(dataset.entries.size());
    for (const auto &e : dataset.entries) pairs.emplace_back(e.word1, e.word2);

    const auto batch = batch_similarity(scorer, pairs);
    std::vector<double> predicted;
    predicted.reserve(pairs.size());
    for (const auto &v : batch.verdicts) predicted.push_back(v.score);

    EvalReport report;
    report.pair_count = pairs.size();
    report.source_counts = batch.counts;
    report.coverage = static_cast<double>(batch.counts.model_total()) /
                      static_cast<double>(report.pair_count);

    const std::string context = " (" + std::to_string(batch.counts.lcs + batch.counts.none) +
                                " of " + std::to_string(pairs.size()) +
                                " pairs not covered by any model)";
    try {
        if (dataset.kind == DatasetKind::graded) {
            std::vector<double> gold;
            gold.reserve(pairs.size());
            for (const auto &e : dataset.entries) gold.push_back(e.gold);
            report.metric_name = "spearman";
            report.value = spearman(gold, predicted);
        } else {
            std::vector<int> labels;
            labels.reserve(pairs.size());
            for (const auto &e : dataset.entries) labels.push_back(e.gold == 1.0 ? 1 : 0);
            report.metric_name = "average_precision";
            report.value = average_precision(labels, predicted);
        }
    } catch (const MetricError &e) {
        throw MetricError(std::string(e.what()) + context);
    }
    return report;
}

EvalReport evaluate(std::shared_ptr<const EmbeddingModel> model, const PairDataset &dataset) {
    return evaluate(SimilarityCascade::single(std::move(model)), dataset);
}

void print_report(std::ostream &out, const EvalReport &report) {
    out << report.metric_name << '=' << fmt6(report.value) << '\n';
    out << "  pairs      " << report.pair_count << '\n';
    out << "  coverage   " << fmt6(report.coverage) << '\n';
    for (std::size_t i = 0; i < report.source_counts.per_model.size(); ++i) {
        out << "  model " << i << "    " << report.source_counts.per_model[i] << '\n';
    }
    out << "  lcs        " << report.source_counts.lcs << '\n';
    out << "  none       " << report.source_counts.none << '\n';
}

std::string report_record(const EvalReport &report) {
    std::ostringstream out;
    out << "metric=" << report.metric_name << " value=" << fmt6(report.value)
        << " pairs=" << report.pair_count << " coverage=" << fmt6(report.coverage);
    for (std::size_t i = 0; i < report.source_counts.per_model.size(); ++i) {
        out << " source_" << i << '=' << report.source_counts.per_model[i];
    }
    out << " lcs=" << report.source_counts.lcs << " none=" << report.source_counts.none;
    return out.str();
}

}  // namespace lexsim
