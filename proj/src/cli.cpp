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

#include "lexsim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>

#include "lexsim/cascade.hpp"
#include "lexsim/corpus.hpp"
#include "lexsim/error.hpp"
#include "lexsim/eval.hpp"
#include "lexsim/model.hpp"
#include "lexsim/sweep.hpp"
#include "lexsim/trainer.hpp"
#include "lexsim/utf8.hpp"

namespace lexsim {

namespace {

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

struct TrainFlags {
    std::string algo = "cbow";
    std::size_t dim = 100;
    std::size_t window = 5;
    std::uint64_t min_count = 5;
    std::size_t negative = 5;
    std::size_t epochs = 5;
    double alpha = 0.025;
    double sample = 0.0;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    bool fixed_window = false;
    std::vector<std::string> corpus;
    std::string stopwords;
    bool no_lowercase = false;
    bool quiet = false;

    TrainingConfig config() const {
        TrainingConfig c;
        c.algorithm = parse_algorithm(algo);
        c.dim = dim;
        c.window = window;
        c.min_count = min_count;
        c.negatives = negative;
        c.epochs = epochs;
        c.alpha0 = alpha;
        c.alpha_min = alpha * 1e-4;
        c.sample = sample;
        c.seed = seed;
        c.workers = workers;
        c.dynamic_window = !fixed_window;
        c.validate();
        return c;
    }

    CorpusConfig corpus_config() const {
        CorpusConfig c;
        for (const auto &p : corpus) c.paths.emplace_back(p);
        if (!stopwords.empty()) c.stopword_path = stopwords;
        c.lowercase = !no_lowercase;
        c.validate();
        return c;
    }
};

void add_training_flags(CLI::App *cmd, TrainFlags &f) {
    cmd->add_option("--algo", f.algo, "cbow or sg (skip-gram)")
        ->check(CLI::IsMember({"cbow", "sg", "skipgram"}));
    cmd->add_option("--dim", f.dim, "Vector size")->check(CLI::PositiveNumber);
    cmd->add_option("--window", f.window, "Max context words per side")->check(CLI::PositiveNumber);
    cmd->add_option("--min-count", f.min_count, "Minimum word frequency")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--negative", f.negative, "Negative samples per pair")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--epochs", f.epochs, "Passes over the corpus")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", f.alpha, "Initial learning rate")->check(CLI::PositiveNumber);
    cmd->add_option("--sample", f.sample, "Frequent-word subsampling threshold (0 = off)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", f.seed, "Random seed");
    cmd->add_option("--workers", f.workers, "Training threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--fixed-window", f.fixed_window, "Use the full window at every position");
    cmd->add_option("--corpus", f.corpus, "Corpus files, one sentence per line")->required();
    cmd->add_option("--stopwords", f.stopwords, "Stop-word list, one word per line");
    cmd->add_flag("--no-lowercase", f.no_lowercase, "Keep token case");
    cmd->add_flag("--quiet", f.quiet, "No progress output");
}

struct ScorerFlags {
    std::vector<std::string> models;
    std::string cascade;
    bool lcs = false;
    bool no_lowercase = false;
};

void add_scorer_flags(CLI::App *cmd, ScorerFlags &f) {
    auto *model = cmd->add_option("--model", f.models, "Model files in priority order");
    auto *cascade = cmd->add_option("--cascade", f.cascade, "Cascade config file");
    model->excludes(cascade);
    cmd->add_flag("--lcs", f.lcs, "Fall back to the longest-common-substring heuristic");
    cmd->add_flag("--no-lowercase", f.no_lowercase, "Do not lowercase query words");
}

SimilarityCascade make_scorer(const ScorerFlags &f) {
    CascadeOptions options;
    options.lowercase = !f.no_lowercase;
    if (!f.cascade.empty()) {
        auto spec = read_cascade_config(f.cascade);
        spec.lcs = spec.lcs || f.lcs;
        return load_cascade(spec, options);
    }
    if (f.models.empty() && !f.lcs) throw ValidationError("one of --model or --cascade is required");
    std::vector<std::shared_ptr<const EmbeddingModel>> models;
    for (const auto &p : f.models) models.push_back(std::make_shared<const EmbeddingModel>(load(p)));
    options.lcs_enabled = f.lcs;
    return SimilarityCascade(std::move(models), options);
}

TrainOptions progress_options(bool quiet, std::ostream &err) {
    TrainOptions options;
    if (quiet) return options;
    options.on_progress = [&err](const TrainProgress &p) {
        const double pct = p.total_words ? 100.0 * p.words_processed / p.total_words : 100.0;
        char buf[160];
        std::snprintf(buf, sizeof buf, "\rprogress %5.1f%%  words %llu  alpha %.6f  words/sec %.0f",
                      pct, static_cast<unsigned long long>(p.words_processed), p.alpha,
                      p.words_per_second);
        err << buf << std::flush;
    };
    return options;
}

void print_stats(std::ostream &err, const TrainStats &s) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "\ntrained on %llu words in %.2f s: %.0f words/sec, %zu worker(s); "
                  "corpus tokens raw %llu, retained %llu\n",
                  static_cast<unsigned long long>(s.words_processed), s.seconds, s.words_per_second,
                  s.workers, static_cast<unsigned long long>(s.raw_tokens),
                  static_cast<unsigned long long>(s.retained_tokens));
    err << buf;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"lexsim: word embeddings and pair-similarity evaluation", "lexsim"};
    app.require_subcommand(1);

    // train
    TrainFlags train_flags;
    std::string train_out;
    std::string train_format = "binary";
    std::string vocab_out;
    auto *train_cmd = app.add_subcommand("train", "Train a CBOW or skip-gram model");
    add_training_flags(train_cmd, train_flags);
    train_cmd->add_option("--out", train_out, "Output model path")->required();
    train_cmd->add_option("--format", train_format, "binary or text")
        ->check(CLI::IsMember({"binary", "text"}));
    train_cmd->add_option("--vocab-out", vocab_out, "Write the vocabulary as word<TAB>count");

    // query
    ScorerFlags query_scorer;
    std::vector<std::string> pair;
    std::string nearest_word;
    std::size_t k = 10;
    auto *query_cmd = app.add_subcommand("query", "Pair similarity or nearest neighbours");
    add_scorer_flags(query_cmd, query_scorer);
    auto *pair_opt = query_cmd->add_option("--pair", pair, "Two words")->expected(2);
    auto *nearest_opt = query_cmd->add_option("--nearest", nearest_word, "Query word");
    pair_opt->excludes(nearest_opt);
    query_cmd->add_option("--k", k, "Neighbour count")->check(CLI::PositiveNumber);

    // eval
    ScorerFlags eval_scorer;
    std::string dataset_path;
    std::string kind = "graded";
    std::string report_path;
    auto *eval_cmd = app.add_subcommand("eval", "Score a model or cascade on a pair dataset");
    add_scorer_flags(eval_cmd, eval_scorer);
    eval_cmd->add_option("--dataset", dataset_path, "word1<TAB>word2<TAB>gold file")->required();
    eval_cmd->add_option("--kind", kind, "graded (Spearman) or binary (average precision)")
        ->check(CLI::IsMember({"graded", "binary"}));
    eval_cmd->add_option("--report", report_path, "Append a key=value record to this file");

    // sweep
    TrainFlags sweep_flags;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> windows;
    std::vector<std::string> sweep_datasets;
    std::vector<std::string> sweep_kinds;
    std::string sweep_out;
    bool sweep_lcs = false;
    bool no_timing = false;
    auto *sweep_cmd = app.add_subcommand("sweep", "Train and evaluate over a dim x window grid");
    add_training_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--dims", dims, "Vector sizes (default 52,100,152,200,252,300)")
        ->delimiter(',');
    sweep_cmd->add_option("--windows", windows, "Window sizes (default 1,2,3,5,10,20)")
        ->delimiter(',');
    sweep_cmd->add_option("--dataset", sweep_datasets, "Evaluation datasets")->required();
    sweep_cmd->add_option("--kind", sweep_kinds, "One kind for all datasets, or one per dataset");
    sweep_cmd->add_option("--out", sweep_out, "CSV output path")->required();
    sweep_cmd->add_flag("--lcs", sweep_lcs, "Evaluate with the string fallback");
    sweep_cmd->add_flag("--no-timing", no_timing, "Write train_seconds as 0");

    // lcs
    std::string lcs_a, lcs_b;
    auto *lcs_cmd = app.add_subcommand("lcs", "Longest-common-substring similarity of two words");
    lcs_cmd->add_option("word1", lcs_a)->required();
    lcs_cmd->add_option("word2", lcs_b)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() != 0) err << "error: " << e.what() << "\n\n" << app.help();
        else app.exit(e, out, err);
        return e.get_exit_code();
    }

    try {
        if (*train_cmd) {
            const auto config = train_flags.config();
            auto result = train(train_flags.corpus_config(), config,
                                progress_options(train_flags.quiet, err));
            save(result.model, train_out,
                 train_format == "text" ? ModelFormat::text : ModelFormat::binary);
            if (!vocab_out.empty()) {
                std::ofstream v(vocab_out, std::ios::binary);
                if (!v) throw IoError("cannot open " + vocab_out);
                result.model.vocab().write_tsv(v);
                if (!v) throw IoError("write failure on " + vocab_out);
            }
            print_stats(err, result.stats);
            out << "model written to " << train_out << " (" << result.model.size() << " words, dim "
                << result.model.dim() << ")\n";
            return 0;
        }

        if (*query_cmd) {
            if (pair.empty() && nearest_word.empty()) {
                throw ValidationError("query needs --pair W1 W2 or --nearest W");
            }
            const auto scorer = make_scorer(query_scorer);
            if (!pair.empty()) {
                const auto v = scorer.similarity(pair[0], pair[1]);
                out << "score=" << fmt6(v.score) << " source=" << v.source.label() << '\n';
                return 0;
            }
            if (scorer.model_count() == 0) throw ValidationError("--nearest needs a model");
            const auto &model = scorer.model(0);
            const std::string word =
                query_scorer.no_lowercase ? nearest_word : utf8::to_lower(nearest_word);
            for (const auto &n : nearest(model, word, k)) {
                out << n.word << '\t' << fmt6(n.score) << '\n';
            }
            return 0;
        }

        if (*eval_cmd) {
            const auto scorer = make_scorer(eval_scorer);
            const auto dataset = load_dataset(dataset_path, parse_dataset_kind(kind));
            const auto report = evaluate(scorer, dataset);
            print_report(out, report);
            if (!report_path.empty()) {
                std::ofstream r(report_path, std::ios::binary | std::ios::app);
                if (!r) throw IoError("cannot open " + report_path);
                r << report_record(report) << '\n';
                if (!r) throw IoError("write failure on " + report_path);
            }
            return 0;
        }

        if (*sweep_cmd) {
            SweepSpec spec;
            spec.fixed = sweep_flags.config();
            if (!dims.empty()) spec.dims = dims;
            if (!windows.empty()) spec.windows = windows;
            if (sweep_kinds.size() > 1 && sweep_kinds.size() != sweep_datasets.size()) {
                throw ValidationError("--kind takes one value or one per --dataset");
            }
            for (std::size_t i = 0; i < sweep_datasets.size(); ++i) {
                const std::string &kd =
                    sweep_kinds.empty() ? "graded" : sweep_kinds[sweep_kinds.size() == 1 ? 0 : i];
                spec.datasets.push_back({sweep_datasets[i], parse_dataset_kind(kd)});
            }
            spec.lcs = sweep_lcs;
            spec.record_timing = !no_timing;
            if (spec.fixed.workers > 1) {
                err << "note: sweep with " << spec.fixed.workers
                    << " workers is not reproducible; use --workers 1 for stable values\n";
            }

            const auto source = file_source(sweep_flags.corpus_config());
            std::ofstream csv(sweep_out, std::ios::binary | std::ios::trunc);
            if (!csv) throw IoError("cannot open " + sweep_out);
            const auto summary = run_sweep(spec, source, csv, err);
            if (!csv) throw IoError("write failure on " + sweep_out);
            out << "sweep wrote " << summary.rows << " rows to " << sweep_out;
            if (summary.error_rows > 0) out << " (" << summary.error_rows << " failed)";
            out << '\n';
            return 0;
        }

        if (*lcs_cmd) {
            const auto match = longest_common_substring(lcs_a, lcs_b);
            const double score = lcs_similarity(lcs_a, lcs_b);
            out << "score=" << fmt6(score) << " substring="
                << (match.length >= kDefaultLcsMinLength ? match.substring : std::string("-"))
                << '\n';
            return 0;
        }
    } catch (const UnknownWordError &e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace lexsim
