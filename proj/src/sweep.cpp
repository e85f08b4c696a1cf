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

#include "lexsim/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>

#include "lexsim/error.hpp"

namespace lexsim {

namespace {

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fmt(const char *pattern, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::vector<std::size_t> SweepSpec::default_dims() { return {52, 100, 152, 200, 252, 300}; }

std::vector<std::size_t> SweepSpec::default_windows() { return {1, 2, 3, 5, 10, 20}; }

void SweepSpec::validate() const {
    if (dims.empty()) throw ValidationError("sweep: dims list is empty");
    if (windows.empty()) throw ValidationError("sweep: windows list is empty");
    if (datasets.empty()) throw ValidationError("sweep: at least one dataset is required");
}

SweepSummary run_sweep(const SweepSpec &spec, const SentenceSource &corpus, std::ostream &csv,
                       std::ostream &log) {
    spec.validate();

    struct LoadedDataset {
        std::string name;
        PairDataset data;
    };
    std::vector<LoadedDataset> datasets;
    for (const auto &d : spec.datasets) {
        datasets.push_back({d.path.string(), load_dataset(d.path, d.kind)});
    }
    std::stable_sort(datasets.begin(), datasets.end(),
                     [](const auto &a, const auto &b) { return a.name < b.name; });

    const EncodedCorpus encoded = encode_corpus(corpus, spec.fixed.min_count);

    SweepSummary summary;
    csv << kSweepCsvHeader << '\n';
    auto write_row = [&](std::size_t dim, std::size_t window, const std::string &dataset,
                         const std::string &metric, const std::string &value, double seconds) {
        csv << dim << ',' << window << ',' << csv_field(dataset) << ',' << metric << ',' << value
            << ',' << fmt("%.3f", spec.record_timing ? seconds : 0.0) << '\n';
        ++summary.rows;
    };

    for (const std::size_t dim : sorted_unique(spec.dims)) {
        for (const std::size_t window : sorted_unique(spec.windows)) {
            TrainingConfig config = spec.fixed;
            config.dim = dim;
            config.window = window;

            std::shared_ptr<const EmbeddingModel> model;
            double seconds = 0.0;
            try {
                auto result = train(encoded, config);
                seconds = result.stats.seconds;
                model = std::make_shared<const EmbeddingModel>(std::move(result.model));
            } catch (const Error &e) {
                log << "sweep: dim=" << dim << " window=" << window << " training failed: "
                    << e.what() << '\n';
                for (const auto &d : datasets) {
                    write_row(dim, window, d.name, "error", "nan", 0.0);
                    ++summary.error_rows;
                }
                continue;
            }

            CascadeOptions options;
            options.lcs_enabled = spec.lcs;
            const SimilarityCascade cascade({model}, options);
            for (const auto &d : datasets) {
                try {
                    const auto report = evaluate(cascade, d.data);
                    write_row(dim, window, d.name, report.metric_name, fmt("%.6f", report.value),
                              seconds);
                } catch (const Error &e) {
                    log << "sweep: dim=" << dim << " window=" << window << " dataset=" << d.name
                        << " evaluation failed: " << e.what() << '\n';
                    write_row(dim, window, d.name, "error", "nan", seconds);
                    ++summary.error_rows;
                }
            }
        }
    }
    csv.flush();
    return summary;
}

}  // namespace lexsim
