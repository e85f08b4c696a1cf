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

// CBOW and continuous skip-gram with negative sampling.
//
// Two drivers share the per-step kernels below:
//   train()            OpenMP workers updating shared parameters without
//                      locks (hogwild). With workers == 1 it is deterministic.
//   train_reference()  plain serial loop over the corpus in file order,
//                      kept as the oracle for the parallel driver.
// For workers == 1 both drivers consume the RNG in the same order and must
// produce bit-identical parameters.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lexsim/corpus.hpp"
#include "lexsim/model.hpp"
#include "lexsim/vocab.hpp"

namespace lexsim {

enum class Algorithm { cbow, skipgram };

std::string to_string(Algorithm algo);
/// Accepts "cbow", "sg" and "skipgram".
Algorithm parse_algorithm(std::string_view name);

struct TrainingConfig {
    Algorithm algorithm = Algorithm::cbow;
    std::size_t dim = 100;
    std::size_t window = 5;
    std::uint64_t min_count = 5;
    std::size_t negatives = 5;
    std::size_t epochs = 5;
    double alpha0 = 0.025;
    double alpha_min = 0.025 * 1e-4;
    double sample = 0.0;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    bool dynamic_window = true;
    double table_power = kDefaultTablePower;
    std::size_t table_size = kDefaultTableSize;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

using Rng = std::mt19937_64;

/// Worker RNG derived from (seed, worker id).
Rng make_worker_rng(std::uint64_t seed, std::size_t worker);

/// Input (word) and output (context) matrices, both V x dim, row-major.
class Parameters {
public:
    Parameters(std::size_t vocab_size, std::size_t dim);

    std::size_t vocab_size() const noexcept { return vocab_size_; }
    std::size_t dim() const noexcept { return dim_; }

    std::span<float> input_row(WordId id) { return {input_.data() + offset(id), dim_}; }
    std::span<const float> input_row(WordId id) const { return {input_.data() + offset(id), dim_}; }
    std::span<float> output_row(WordId id) { return {output_.data() + offset(id), dim_}; }
    std::span<const float> output_row(WordId id) const {
        return {output_.data() + offset(id), dim_};
    }

    std::vector<float> &input() noexcept { return input_; }
    const std::vector<float> &input() const noexcept { return input_; }
    std::vector<float> &output() noexcept { return output_; }
    const std::vector<float> &output() const noexcept { return output_; }

    bool all_finite() const;

private:
    std::size_t offset(WordId id) const { return static_cast<std::size_t>(id) * dim_; }

    std::size_t vocab_size_;
    std::size_t dim_;
    std::vector<float> input_;
    std::vector<float> output_;
};

/// Input rows i.i.d. uniform on [-0.5/dim, 0.5/dim]; output rows zero.
Parameters init_parameters(std::size_t vocab_size, std::size_t dim, std::uint64_t seed);

/// Overflow-safe logistic function.
double logistic(double s);
/// log(logistic(s)) without overflow or cancellation.
double log_logistic(double s);

enum class Label : int { negative = 0, positive = 1 };

struct PairGradient {
    double loss = 0.0;
    std::vector<double> center;
    std::vector<double> output;
};

/// Loss -log sigma(+-s) of one (predictor, output word) pair and its gradient
/// with respect to both vectors, where s = dot(center, output).
PairGradient pair_loss_and_grads(std::span<const double> center, std::span<const double> output,
                                 Label label);

/// Scratch buffers reused across steps.
struct StepWorkspace {
    std::vector<float> hidden;
    std::vector<float> grad;
    std::vector<WordId> negatives;
};

/// Draws `count` ids from the table, redrawing any that equal `target`.
/// Leaves `out` empty when the table holds no word other than `target`.
void sample_negatives(const NegativeSamplingTable &table, WordId target, std::size_t count,
                      Rng &rng, std::vector<WordId> &out);

/// One CBOW update with explicit negatives. Hidden vector is the mean of the
/// context rows; output rows are updated pair by pair, and each context row
/// receives its 1/n share of the hidden-vector gradient at the end.
/// Returns the summed pair loss.
double cbow_update(std::span<const WordId> context, WordId target,
                   std::span<const WordId> negatives, Parameters &params, double alpha,
                   StepWorkspace &ws);

/// One skip-gram update: `center`'s input row predicts `context`.
double skipgram_update(WordId center, WordId context, std::span<const WordId> negatives,
                       Parameters &params, double alpha, StepWorkspace &ws);

double cbow_step(std::span<const WordId> context, WordId target, Parameters &params,
                 const NegativeSamplingTable &table, std::size_t negatives, double alpha, Rng &rng,
                 StepWorkspace &ws);
double cbow_step(std::span<const WordId> context, WordId target, Parameters &params,
                 const NegativeSamplingTable &table, std::size_t negatives, double alpha, Rng &rng);

double skipgram_step(WordId center, WordId context, Parameters &params,
                     const NegativeSamplingTable &table, std::size_t negatives, double alpha,
                     Rng &rng, StepWorkspace &ws);
double skipgram_step(WordId center, WordId context, Parameters &params,
                     const NegativeSamplingTable &table, std::size_t negatives, double alpha,
                     Rng &rng);

/// Linear decay from alpha0 to alpha_min over total_words, floored at alpha_min.
double lr_schedule(std::uint64_t words_processed, std::uint64_t total_words, double alpha0,
                   double alpha_min);

/// Corpus mapped to vocabulary ids; out-of-vocabulary tokens are dropped.
/// Sentence i spans tokens[offsets[i], offsets[i + 1]).
struct EncodedCorpus {
    Vocabulary vocab;
    std::vector<WordId> tokens;
    std::vector<std::size_t> offsets{0};

    std::size_t sentence_count() const noexcept { return offsets.size() - 1; }
};

/// Counts and encodes in one pass over `sentences`.
EncodedCorpus encode_corpus(const SentenceSource &sentences, std::uint64_t min_count);

struct TrainProgress {
    std::uint64_t words_processed = 0;
    std::uint64_t total_words = 0;
    double alpha = 0.0;
    double words_per_second = 0.0;
};

struct TrainOptions {
    /// Called from worker 0 roughly every `progress_every` words.
    std::function<void(const TrainProgress &)> on_progress;
    std::uint64_t progress_every = 100'000;
};

struct TrainStats {
    std::uint64_t raw_tokens = 0;
    std::uint64_t retained_tokens = 0;
    std::uint64_t words_processed = 0;
    std::size_t workers = 1;
    double seconds = 0.0;
    double words_per_second = 0.0;
    double mean_step_loss = 0.0;  // summed pair loss per update call
};

struct TrainResult {
    EmbeddingModel model;
    TrainStats stats;
};

/// Parameters after training, for callers that need the output matrix too.
struct TrainedParameters {
    Parameters params;
    TrainStats stats;
};

TrainedParameters train_parameters(const EncodedCorpus &corpus, const TrainingConfig &config,
                                   const TrainOptions &options = {});
TrainedParameters train_parameters_reference(const EncodedCorpus &corpus,
                                             const TrainingConfig &config);

TrainResult train(const EncodedCorpus &corpus, const TrainingConfig &config,
                  const TrainOptions &options = {});
TrainResult train(const SentenceSource &sentences, const TrainingConfig &config,
                  const TrainOptions &options = {});
TrainResult train(const CorpusConfig &corpus, const TrainingConfig &config,
                  const TrainOptions &options = {});

TrainResult train_reference(const EncodedCorpus &corpus, const TrainingConfig &config);

}  // namespace lexsim
