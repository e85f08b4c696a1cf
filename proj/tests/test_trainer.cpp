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

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "lexsim/error.hpp"
#include "lexsim/trainer.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lexsim;

namespace {

const double kLn2 = std::log(2.0);

std::vector<double> random_vector(std::mt19937_64 &rng, std::size_t dim, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(dim);
    for (auto &x : v) x = u(rng);
    return v;
}

void randomize(Parameters &params, std::mt19937_64 &rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    for (auto &x : params.input()) x = static_cast<float>(u(rng));
    for (auto &x : params.output()) x = static_cast<float>(u(rng));
}

std::vector<double> row(const std::vector<float> &m, std::size_t dim, WordId id) {
    return {m.begin() + id * dim, m.begin() + (id + 1) * dim};
}

EncodedCorpus toy_corpus(std::size_t sentences, std::uint64_t seed) {
    return encode_corpus(memory_source(testutil::two_cluster_corpus(sentences, 6, 8, seed)), 1);
}

}  // namespace

TEST_CASE("init_parameters") {
    const auto a = init_parameters(50, 100, 9);
    for (float x : a.input()) CHECK(std::abs(x) <= 0.005f);
    for (float x : a.output()) CHECK(x == 0.0f);
    const auto b = init_parameters(50, 100, 9);
    CHECK(a.input() == b.input());
    CHECK(init_parameters(50, 100, 10).input() != a.input());
    CHECK_THROWS_AS(init_parameters(0, 10, 1), ValidationError);
}

TEST_CASE("logistic helpers are overflow safe") {
    CHECK(logistic(0.0) == 0.5);
    CHECK(logistic(1000.0) == 1.0);
    CHECK(logistic(-1000.0) == 0.0);
    CHECK(log_logistic(-1000.0) == doctest::Approx(-1000.0));
    CHECK(std::isfinite(log_logistic(-1e300)));
    CHECK(log_logistic(800.0) == 0.0);
    for (double s : {-30.0, -2.0, -0.1, 0.0, 0.3, 5.0, 40.0}) {
        CHECK(-log_logistic(s) == doctest::Approx(oracle::neg_log_sigmoid(s)).epsilon(1e-12));
    }
}

TEST_CASE("pair_loss_and_grads examples") {
    const std::vector<double> zero(4, 0.0), v{1, -2, 0.5, 3};
    auto g = pair_loss_and_grads(zero, v, Label::positive);
    CHECK(g.loss == doctest::Approx(kLn2));
    for (std::size_t i = 0; i < 4; ++i) CHECK(g.center[i] == doctest::Approx(-0.5 * v[i]));

    g = pair_loss_and_grads(v, zero, Label::negative);
    CHECK(g.loss == doctest::Approx(kLn2));
    for (double x : g.center) CHECK(x == 0.0);
    CHECK_THROWS_AS(pair_loss_and_grads(v, std::vector<double>(3), Label::positive),
                    ValidationError);
}

TEST_CASE("pair gradients match central finite differences") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> dims(1, 16);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = dims(rng);
        const auto c = random_vector(rng, dim, 1.0);
        const auto o = random_vector(rng, dim, 1.0);
        const Label label = trial % 2 ? Label::positive : Label::negative;
        const auto g = pair_loss_and_grads(c, o, label);

        // ns_objective treats row 0 as positive; negate the output for a negative pair.
        std::vector<double> o_signed = o;
        if (label == Label::negative) {
            for (auto &x : o_signed) x = -x;
        }
        auto loss_c = [&](const std::vector<double> &x) { return oracle::ns_objective(x, {o_signed}); };
        auto loss_o = [&](const std::vector<double> &x) {
            std::vector<double> xs = x;
            if (label == Label::negative) {
                for (auto &y : xs) y = -y;
            }
            return oracle::ns_objective(c, {xs});
        };
        CHECK(g.loss == doctest::Approx(loss_c(c)).epsilon(1e-12));
        CHECK(oracle::relative_error(g.center, oracle::fd_gradient(loss_c, c, 1e-4)) < 1e-4);
        CHECK(oracle::relative_error(g.output, oracle::fd_gradient(loss_o, o, 1e-4)) < 1e-4);
    }
}

TEST_CASE("all-zero parameters give (1 + negatives) ln 2") {
    Parameters params(10, 8);
    const std::vector<std::uint64_t> counts(10, 1);
    const NegativeSamplingTable table(counts, 0.75, 1000);
    Rng rng = make_worker_rng(1, 0);
    const std::vector<WordId> context{1, 2, 3};
    CHECK(cbow_step(context, 4, params, table, 5, 0.025, rng) == doctest::Approx(6 * kLn2));

    Parameters zero(10, 8);
    CHECK(skipgram_step(1, 2, zero, table, 3, 0.025, rng) == doctest::Approx(4 * kLn2));
}

TEST_CASE("single-word cbow context uses that vector as hidden") {
    std::mt19937_64 rng(5);
    Parameters params(6, 8);
    randomize(params, rng, 0.5);
    Parameters copy = params;
    StepWorkspace ws, ws2;
    const std::vector<WordId> negatives{3, 4};
    const std::vector<WordId> context{2};
    const double cbow_loss = cbow_update(context, 1, negatives, params, 0.1, ws);
    const double sg_loss = skipgram_update(2, 1, negatives, copy, 0.1, ws2);
    CHECK(cbow_loss == sg_loss);
    CHECK(params.input() == copy.input());
    CHECK(params.output() == copy.output());
}

TEST_CASE("cbow_update moves parameters along the analytic gradient") {
    std::mt19937_64 rng(17);
    const double alpha = 0.5;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 4 + trial % 12;
        Parameters params(8, dim);
        randomize(params, rng, 0.5);
        const Parameters before = params;
        const std::vector<WordId> context{0, 1, 2};
        const std::vector<WordId> negatives{4, 5, 6};
        const WordId target = 3;
        StepWorkspace ws;
        cbow_update(context, target, negatives, params, alpha, ws);

        // Objective as a function of one context row, computed in double.
        std::vector<WordId> rows{target, 4, 5, 6};
        auto objective_of_input = [&](std::size_t which, const std::vector<double> &x) {
            std::vector<double> h(dim, 0.0);
            for (WordId c : context) {
                const auto r = c == which ? x : row(before.input(), dim, c);
                for (std::size_t d = 0; d < dim; ++d) h[d] += r[d] / 3.0;
            }
            std::vector<std::vector<double>> out;
            for (WordId r : rows) out.push_back(row(before.output(), dim, r));
            return oracle::ns_objective(h, out);
        };
        for (WordId c : context) {
            const auto x0 = row(before.input(), dim, c);
            const auto fd = oracle::fd_gradient(
                [&](const std::vector<double> &x) { return objective_of_input(c, x); }, x0, 1e-4);
            std::vector<double> step(dim);
            const auto x1 = row(params.input(), dim, c);
            for (std::size_t d = 0; d < dim; ++d) step[d] = (x0[d] - x1[d]) / alpha;
            CHECK(oracle::relative_error(step, fd) < 1e-3);
        }
    }
}

TEST_CASE("skipgram_update moves parameters along the analytic gradient") {
    std::mt19937_64 rng(19);
    const double alpha = 0.5;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 1 + trial % 16;
        Parameters params(8, dim);
        randomize(params, rng, 0.5);
        const Parameters before = params;
        const std::vector<WordId> negatives{4, 5};
        StepWorkspace ws;
        skipgram_update(0, 3, negatives, params, alpha, ws);

        auto rows_signed = [&](const Parameters &p) {
            std::vector<std::vector<double>> out{row(p.output(), dim, 3)};
            for (WordId n : negatives) out.push_back(row(p.output(), dim, n));
            return out;
        };
        const auto x0 = row(before.input(), dim, 0);
        const auto fd = oracle::fd_gradient(
            [&](const std::vector<double> &x) { return oracle::ns_objective(x, rows_signed(before)); },
            x0, 1e-4);
        std::vector<double> step(dim);
        const auto x1 = row(params.input(), dim, 0);
        for (std::size_t d = 0; d < dim; ++d) step[d] = (x0[d] - x1[d]) / alpha;
        CHECK(oracle::relative_error(step, fd) < 1e-3);

        // Positive output row: d/do of -log sigma(c.o) is (sigma - 1) c.
        const auto o0 = row(before.output(), dim, 3);
        const auto fd_o = oracle::fd_gradient(
            [&](const std::vector<double> &o) { return oracle::neg_log_sigmoid(std::inner_product(
                                                    x0.begin(), x0.end(), o.begin(), 0.0)); },
            o0, 1e-4);
        const auto o1 = row(params.output(), dim, 3);
        for (std::size_t d = 0; d < dim; ++d) step[d] = (o0[d] - o1[d]) / alpha;
        CHECK(oracle::relative_error(step, fd_o) < 1e-3);
    }
}

TEST_CASE("repeating a positive pair with fixed negatives lowers its loss") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        Parameters params(6, 10);
        randomize(params, rng, 0.3);
        StepWorkspace ws;
        const std::vector<WordId> negatives{2, 3, 4};
        const double first = skipgram_update(0, 1, negatives, params, 0.05, ws);
        const double second = skipgram_update(0, 1, negatives, params, 0.05, ws);
        CHECK(second < first);

        const std::vector<WordId> context{0, 5};
        const double c1 = cbow_update(context, 1, negatives, params, 0.05, ws);
        const double c2 = cbow_update(context, 1, negatives, params, 0.05, ws);
        CHECK(c2 < c1);
    }
}

TEST_CASE("lr_schedule") {
    const double a0 = 0.025, amin = 0.025e-4;
    CHECK(lr_schedule(0, 1000, a0, amin) == a0);
    CHECK(lr_schedule(1000, 1000, a0, amin) == doctest::Approx(amin).epsilon(1e-12));
    CHECK(lr_schedule(500, 1000, a0, amin) == doctest::Approx((a0 + amin) / 2).epsilon(1e-12));
    CHECK(lr_schedule(5000, 1000, a0, amin) == doctest::Approx(amin).epsilon(1e-12));
    double previous = a0;
    for (std::uint64_t w = 0; w <= 2000; w += 7) {
        const double a = lr_schedule(w, 1000, a0, amin);
        CHECK(a <= previous);
        CHECK(a >= amin);
        previous = a;
    }
}

TEST_CASE("sampled negatives never equal the target") {
    const std::vector<std::uint64_t> counts{100, 1, 1};
    const NegativeSamplingTable table(counts, 0.75, 1000);
    Rng rng = make_worker_rng(4, 0);
    std::vector<WordId> out;
    for (int i = 0; i < 2000; ++i) {
        const WordId target = static_cast<WordId>(i % 3);
        sample_negatives(table, target, 5, rng, out);
        CHECK(out.size() == 5);
        for (WordId n : out) CHECK(n != target);
    }
    const std::vector<std::uint64_t> single{3};
    const NegativeSamplingTable lonely(single, 0.75, 10);
    sample_negatives(lonely, 0, 5, rng, out);
    CHECK(out.empty());
}

TEST_CASE("training config validation") {
    TrainingConfig config;
    CHECK_NOTHROW(config.validate());
    config.dim = 0;
    CHECK_THROWS_AS(config.validate(), ValidationError);
    config = {};
    config.alpha_min = 1.0;
    CHECK_THROWS_AS(config.validate(), ValidationError);
    CHECK(parse_algorithm("sg") == Algorithm::skipgram);
    CHECK(parse_algorithm("cbow") == Algorithm::cbow);
    CHECK_THROWS_AS(parse_algorithm("glove"), ValidationError);
}

TEST_CASE("encode_corpus drops out-of-vocabulary tokens and empty sentences") {
    const auto corpus = encode_corpus(memory_source({{"a", "a", "b"}, {"c", "d"}, {"b", "a"}}), 2);
    CHECK(corpus.vocab.size() == 2);
    CHECK(corpus.sentence_count() == 2);
    CHECK(corpus.tokens == std::vector<WordId>{0, 0, 1, 1, 0});
    CHECK(corpus.vocab.raw_tokens() == 7);
    CHECK_THROWS_AS(encode_corpus(memory_source({}), 1), EmptyVocabularyError);
}

TEST_CASE("single-worker training is bit-identical and matches the serial reference") {
    const auto corpus = toy_corpus(400, 1);
    for (auto algo : {Algorithm::cbow, Algorithm::skipgram}) {
        for (double sample : {0.0, 1e-2}) {
            for (bool dynamic : {true, false}) {
                TrainingConfig config;
                config.algorithm = algo;
                config.dim = 12;
                config.window = 3;
                config.min_count = 1;
                config.epochs = 2;
                config.sample = sample;
                config.dynamic_window = dynamic;
                config.table_size = 10000;
                const auto a = train_parameters(corpus, config);
                const auto b = train_parameters(corpus, config);
                const auto r = train_parameters_reference(corpus, config);
                CHECK(a.params.input() == b.params.input());
                CHECK(a.params.input() == r.params.input());
                CHECK(a.params.output() == r.params.output());
                CHECK(a.stats.words_processed == r.stats.words_processed);
                CHECK(a.params.all_finite());
                CHECK(std::isfinite(a.stats.mean_step_loss));
                CHECK(a.stats.mean_step_loss >= 0.0);
            }
        }
    }
}

TEST_CASE("training statistics and multi-worker sanity") {
    const auto corpus = toy_corpus(600, 2);
    TrainingConfig config;
    config.dim = 16;
    config.min_count = 1;
    config.epochs = 3;
    config.table_size = 10000;
    const auto single = train(corpus, config);
    CHECK(single.stats.retained_tokens == corpus.tokens.size());
    CHECK(single.stats.words_processed == 3 * corpus.tokens.size());
    CHECK(single.model.size() == corpus.vocab.size());

    config.workers = 4;
    std::size_t calls = 0;
    TrainOptions options;
    options.progress_every = 1000;
    options.on_progress = [&](const TrainProgress &p) {
        ++calls;
        CHECK(p.alpha <= config.alpha0);
    };
    const auto multi = train_parameters(corpus, config, options);
    CHECK(multi.params.all_finite());
    CHECK(multi.stats.workers >= 1);
    CHECK(calls > 0);
}

TEST_CASE("train from files surfaces the empty vocabulary") {
    testutil::TempDir dir;
    testutil::write_file(dir / "c.txt", "один\n");
    TrainingConfig config;
    config.min_count = 1;
    CHECK_THROWS_AS(train(CorpusConfig{{dir / "c.txt"}, std::nullopt, true}, config),
                    EmptyVocabularyError);
}
