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

// Per-sentence training pass shared by the serial and OpenMP drivers.
// RNG consumption order per sentence: one subsampling draw per token (only
// when sample > 0), then per kept position one window draw (dynamic window
// only) followed by the negative draws of each update.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lexsim/trainer.hpp"

namespace lexsim::detail {

struct SentenceScratch {
    StepWorkspace step;
    std::vector<WordId> kept;
    std::vector<WordId> context;
    double loss = 0.0;
    std::uint64_t updates = 0;
};

class SentenceKernel {
public:
    SentenceKernel(const TrainingConfig &config, const Vocabulary &vocab,
                   const NegativeSamplingTable &table, Parameters &params)
        : config_(config), table_(table), params_(params) {
        if (config.sample > 0.0) {
            keep_prob_.resize(vocab.size());
            for (WordId id = 0; id < vocab.size(); ++id) {
                keep_prob_[id] =
                    subsample_keep_prob(vocab.count(id), vocab.total_tokens(), config.sample);
            }
        }
    }

    void run(std::span<const WordId> sentence, double alpha, Rng &rng,
             SentenceScratch &scratch) const {
        auto &kept = scratch.kept;
        kept.clear();
        if (keep_prob_.empty()) {
            kept.assign(sentence.begin(), sentence.end());
        } else {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (WordId id : sentence) {
                if (unit(rng) < keep_prob_[id]) kept.push_back(id);
            }
        }

        const std::size_t n = kept.size();
        for (std::size_t pos = 0; pos < n; ++pos) {
            std::size_t span = config_.window;
            if (config_.dynamic_window) {
                span = std::uniform_int_distribution<std::size_t>(1, config_.window)(rng);
            }
            const std::size_t lo = pos >= span ? pos - span : 0;
            const std::size_t hi = std::min(n - 1, pos + span);

            if (config_.algorithm == Algorithm::cbow) {
                auto &context = scratch.context;
                context.clear();
                for (std::size_t j = lo; j <= hi; ++j) {
                    if (j != pos) context.push_back(kept[j]);
                }
                if (context.empty()) continue;
                scratch.loss += cbow_step(context, kept[pos], params_, table_, config_.negatives,
                                          alpha, rng, scratch.step);
                ++scratch.updates;
            } else {
                for (std::size_t j = lo; j <= hi; ++j) {
                    if (j == pos) continue;
                    scratch.loss += skipgram_step(kept[pos], kept[j], params_, table_,
                                                  config_.negatives, alpha, rng, scratch.step);
                    ++scratch.updates;
                }
            }
        }
    }

private:
    const TrainingConfig &config_;
    const NegativeSamplingTable &table_;
    Parameters &params_;
    std::vector<double> keep_prob_;
};

inline NegativeSamplingTable make_table(const Vocabulary &vocab, const TrainingConfig &config) {
    return NegativeSamplingTable(vocab, config.table_power,
                                 std::max<std::size_t>(config.table_size, vocab.size()));
}

}  // namespace lexsim::detail
