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

// Word-pair benchmarks: graded datasets are scored with Spearman's rank
// correlation, binary (related / unrelated) datasets with non-interpolated
// average precision.

#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lexsim/cascade.hpp"

namespace lexsim {

enum class DatasetKind { graded, binary };

std::string to_string(DatasetKind kind);
DatasetKind parse_dataset_kind(std::string_view name);

struct PairEntry {
    std::string word1;
    std::string word2;
    double gold = 0.0;
};

struct PairDataset {
    std::vector<PairEntry> entries;
    DatasetKind kind = DatasetKind::graded;
};

/// TSV "word1<TAB>word2<TAB>gold", '#' comments and blank lines skipped.
/// Graded gold must lie in [0, 1], binary gold in {0, 1}.
PairDataset load_dataset(const std::filesystem::path &path, DatasetKind kind);
PairDataset parse_dataset(std::string_view text, DatasetKind kind);

/// Pearson correlation of fractional (tie-averaged) ranks.
/// Throws MetricError for fewer than two items or a constant list.
double spearman(std::span<const double> gold, std::span<const double> predicted);

/// Ranks by descending score (ties keep input order) and averages
/// precision@i over the positive positions. Throws MetricError without
/// positives.
double average_precision(std::span<const int> labels, std::span<const double> scores);

/// 1-based ranks, ties receive the mean of the ranks they span.
std::vector<double> fractional_ranks(std::span<const double> values);

struct EvalReport {
    std::string metric_name;  // "spearman" or "average_precision"
    double value = 0.0;
    std::size_t pair_count = 0;
    SourceCounts source_counts;
    double coverage = 0.0;  // share of pairs answered by an embedding model
};

EvalReport evaluate(const SimilarityCascade &scorer, const PairDataset &dataset);
/// Bare model: a one-model cascade without the string fallback.
EvalReport evaluate(std::shared_ptr<const EmbeddingModel> model, const PairDataset &dataset);

/// Human-readable table; the first line is "<metric>=<value>".
void print_report(std::ostream &out, const EvalReport &report);

/// Single-line key=value record.
std::string report_record(const EvalReport &report);

}  // namespace lexsim
