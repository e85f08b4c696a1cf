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
#include <ostream>
#include <vector>

#include "lexsim/corpus.hpp"
#include "lexsim/eval.hpp"
#include "lexsim/trainer.hpp"

namespace lexsim {

struct DatasetSpec {
    std::filesystem::path path;
    DatasetKind kind = DatasetKind::graded;
};

/// Grid of (vector size, window) points trained from one template config.
struct SweepSpec {
    std::vector<std::size_t> dims = default_dims();
    std::vector<std::size_t> windows = default_windows();
    TrainingConfig fixed;
    std::vector<DatasetSpec> datasets;
    bool lcs = false;
    /// When false, train_seconds is written as 0 so the CSV is reproducible.
    bool record_timing = true;

    /// Multiples of 4 starting at 52.
    static std::vector<std::size_t> default_dims();
    static std::vector<std::size_t> default_windows();

    void validate() const;
};

inline constexpr const char *kSweepCsvHeader = "dim,window,dataset,metric,value,train_seconds";

struct SweepSummary {
    std::size_t rows = 0;
    std::size_t error_rows = 0;
};

/// Trains each grid point, evaluates it on every dataset and writes one CSV
/// row per (dim, window, dataset), sorted by that key. A grid point that
/// fails is written as metric "error" with value "nan" and the sweep goes on;
/// `log` receives the failure messages.
SweepSummary run_sweep(const SweepSpec &spec, const SentenceSource &corpus, std::ostream &csv,
                       std::ostream &log);

}  // namespace lexsim
