#include "lrlstm/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "lrlstm/analysis.hpp"
#include "lrlstm/config.hpp"
#include "lrlstm/synthetic.hpp"

namespace lrlstm {

namespace {

namespace fs = std::filesystem;

// Raw flag values; only flags the user actually passed overlay the config.
struct Flags {
    std::string config_path;
    std::map<std::string, std::string> values;  // config key -> value
    std::vector<std::string> disable;

    CLI::App* cmd = nullptr;

    void add_common(CLI::App* app, bool with_data_flags = true) {
        cmd = app;
        app->add_option("--config", config_path, "configuration file (key = value sections)");
        auto opt = [&](const char* flag, const char* key, const char* help) {
            values[key];  // ensure the slot exists
            app->add_option_function<std::string>(
                   flag, [this, key](const std::string& v) { values[key] = v; }, help)
                ->group("Overrides");
        };
        opt("--seed", "train.seed", "64-bit run seed");
        opt("--model", "model.variant", "lstm | bilstm");
        opt("--margin", "regularizers.margin", "hinge margin M");
        opt("--alpha", "regularizers.alpha", "regularization weight");
        opt("--beta", "regularizers.beta", "L2 weight");
        opt("--out", "output.dir", "output directory");
        opt("--threads", "train.threads", "worker threads (results identical for any N)");
        if (!with_data_flags) {
            add_common_tail(app);
            return;
        }
        opt("--dim", "model.dim", "hidden size d");
        opt("--embed-dim", "model.embed_dim", "embedding size");
        opt("--data-format", "data.format", "mr | sst | tsv");
        opt("--mr-pos", "data.mr_pos", "MR positive-sentence file");
        opt("--mr-neg", "data.mr_neg", "MR negative-sentence file");
        opt("--train", "data.train", "train file (sst/tsv)");
        opt("--valid", "data.valid", "validation file (sst/tsv)");
        opt("--test", "data.test", "test file (sst/tsv)");
        opt("--classes", "data.classes", "label count for tsv data");
        opt("--split", "data.split", "train,valid,test ratios");
        opt("--lexicon", "resources.lexicon", "sentiment lexicon TSV");
        opt("--negators", "resources.negators", "negator list file");
        opt("--intensifiers", "resources.intensifiers", "intensifier list file");
        opt("--embeddings", "resources.embeddings", "pretrained embedding text file");
        opt("--batch-size", "train.batch_size", "sentences per mini-batch");
        opt("--max-batches", "train.max_batches", "training batches");
        opt("--eval-every", "train.eval_every", "validation cadence in batches");
        opt("--lr", "train.adagrad_lr", "AdaGrad learning rate");
        opt("--embed-lr", "train.embed_lr", "embedding SGD learning rate");
        opt("--dropout", "train.dropout", "dropout probability");
        add_common_tail(app);
    }

    void add_common_tail(CLI::App* app) {
        app->add_option("--disable", disable, "disable a regularizer (nsr|sr|nr|ir)")
            ->group("Overrides");
        app->add_flag_function(
               "--no-clip",
               [this](int64_t) { values["train.clip"] = "off"; },
               "disable gradient-norm clipping")
            ->group("Overrides");
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_run_config(config_path);
        for (const auto& [key, value] : values) {
            if (!value.empty()) apply_config_key(cfg, key, value);
        }
        if (!disable.empty()) {
            std::string joined;
            for (const auto& d : disable) {
                if (!joined.empty()) joined += ',';
                joined += d;
            }
            apply_config_key(cfg, "regularizers.disable", joined);
        }
        return cfg;
    }
};

void require_file(const std::string& key, const std::string& path) {
    if (path.empty()) throw ConfigError("missing required path for " + key);
    if (!fs::exists(path)) throw ConfigError(key + ": no such file: " + path);
}

struct LoadedData {
    Dataset full;                 // everything, pre-split
    Dataset train, valid, test;  // split or per-file parts
};

LoadedData load_data(const RunConfig& cfg) {
    LoadedData d;
    if (cfg.data_format == "mr") {
        require_file("data.mr_pos", cfg.mr_pos);
        require_file("data.mr_neg", cfg.mr_neg);
        d.full = load_mr(cfg.mr_pos, cfg.mr_neg);
        auto parts = split_dataset(d.full, cfg.split, cfg.seed);
        d.train = std::move(parts[0]);
        d.valid = std::move(parts[1]);
        d.test = std::move(parts[2]);
        return d;
    }
    auto load_one = [&](const std::string& path) {
        return cfg.data_format == "sst"
                   ? load_sst(path)
                   : load_tsv(path, cfg.classes == 5 ? LabelScheme::fine5()
                              : cfg.classes == 2     ? LabelScheme::binary()
                                                      : LabelScheme{cfg.classes, {}});
    };
    require_file("data.train", cfg.train_path);
    if (!cfg.valid_path.empty() || !cfg.test_path.empty()) {
        require_file("data.valid", cfg.valid_path);
        require_file("data.test", cfg.test_path);
        d.train = load_one(cfg.train_path);
        d.valid = load_one(cfg.valid_path);
        d.test = load_one(cfg.test_path);
        d.full = d.train;
        d.full.name += "+valid+test";
        d.full.sentences.insert(d.full.sentences.end(), d.valid.sentences.begin(),
                                d.valid.sentences.end());
        d.full.sentences.insert(d.full.sentences.end(), d.test.sentences.begin(),
                                d.test.sentences.end());
    } else {
        d.full = load_one(cfg.train_path);
        auto parts = split_dataset(d.full, cfg.split, cfg.seed);
        d.train = std::move(parts[0]);
        d.valid = std::move(parts[1]);
        d.test = std::move(parts[2]);
    }
    return d;
}

struct LoadedResources {
    Lexicon lexicon;
    WordLists lists;
};

LoadedResources load_resources(const RunConfig& cfg) {
    LoadedResources r;
    if (!cfg.lexicon_path.empty()) {
        require_file("resources.lexicon", cfg.lexicon_path);
        r.lexicon = load_lexicon(cfg.lexicon_path);
    }
    WordLists defaults = WordLists::defaults();
    if (!cfg.negators_path.empty()) {
        require_file("resources.negators", cfg.negators_path);
        r.lists.negators = load_word_list(cfg.negators_path);
    } else {
        r.lists.negators = std::move(defaults.negators);
    }
    if (!cfg.intensifiers_path.empty()) {
        require_file("resources.intensifiers", cfg.intensifiers_path);
        r.lists.intensifiers = load_word_list(cfg.intensifiers_path);
    } else {
        r.lists.intensifiers = std::move(defaults.intensifiers);
    }
    for (const auto& n : r.lists.negators) {
        if (r.lists.intensifiers.count(n)) {
            throw ConfigError("negator and intensifier lists overlap on '" + n + "'");
        }
    }
    return r;
}

std::vector<std::string> collect_vocab(const LoadedData& d) {
    std::vector<std::string> vocab = {"<unk>"};
    for (const Dataset* ds : {&d.train, &d.valid, &d.test}) {
        for (const auto& s : ds->sentences) {
            vocab.insert(vocab.end(), s.tokens.begin(), s.tokens.end());
        }
    }
    return vocab;
}

ModelParams build_model(const RunConfig& cfg, const LoadedData& d, const LoadedResources& r) {
    if (!cfg.embeddings_path.empty()) require_file("resources.embeddings", cfg.embeddings_path);
    EmbeddingTable table =
        load_embeddings(cfg.embeddings_path, collect_vocab(d), cfg.embed_dim, cfg.seed);
    if (table.coverage < 1.0 && !cfg.embeddings_path.empty()) {
        std::fprintf(stderr, "embedding coverage: %.1f%%\n", table.coverage * 100.0);
    }
    Dims dims{cfg.dim, cfg.embed_dim, d.train.scheme.C};
    return init_params(cfg.seed, dims, cfg.model_variant(), r.lists, std::move(table));
}

std::string sanitize(const std::string& word) {
    std::string out = word;
    for (char& c : out) {
        if (c == ' ' || c == '/' || c == '\\') c = '_';
    }
    return out;
}

Dataset apply_filter(const Dataset& ds, const std::string& filter, const LoadedResources& r) {
    RoleFilter f;
    if (filter == "negation") {
        f = RoleFilter::ContainsNegator;
    } else if (filter == "intensity") {
        f = RoleFilter::ContainsIntensifier;
    } else if (filter == "sentiment") {
        f = RoleFilter::ContainsSentiment;
    } else {
        throw ConfigError("unknown filter '" + filter + "' (negation|intensity|sentiment)");
    }
    return extract_subset(ds, f, r.lists, r.lexicon);
}

// --- subcommand bodies ---

int cmd_train(const RunConfig& cfg) {
    write_config_snapshot(cfg, cfg.out_dir);
    LoadedData data = load_data(cfg);
    LoadedResources res = load_resources(cfg);
    ModelParams model = build_model(cfg, data, res);

    auto prepared_train = prepare_dataset(data.train, model, res.lexicon, res.lists);
    auto prepared_valid = prepare_dataset(data.valid, model, res.lexicon, res.lists);
    TrainConfig tcfg = cfg.to_train_config();
    tcfg.progress = true;
    TrainResult result = train(prepared_train, prepared_valid, model, tcfg);

    write_train_log_csv(result.log, cfg.out_dir + "/train_log.csv");
    std::string ckpt_path = cfg.out_dir + "/model.ckpt";
    {
        std::ofstream out(ckpt_path, std::ios::binary);
        if (!out) throw IoError("cannot write checkpoint: " + ckpt_path);
        out.write(reinterpret_cast<const char*>(result.best_checkpoint.data()),
                  static_cast<std::streamsize>(result.best_checkpoint.size()));
    }
    if (result.log.aborted) {
        throw NumericError("training aborted: " + result.log.abort_reason +
                           " (last good checkpoint kept at " + ckpt_path + ")");
    }

    ModelParams best = deserialize_checkpoint(result.best_checkpoint);
    double best_valid = result.log.best_index >= 0
                            ? result.log.records[static_cast<size_t>(result.log.best_index)].valid_acc
                            : 0.0;
    std::printf("checkpoint = %s\n", ckpt_path.c_str());
    std::printf("valid_acc = %.17g\n", best_valid);
    if (!data.test.sentences.empty()) {
        std::printf("test_acc = %.17g\n", evaluate(best, data.test, tcfg.threads));
    }
    return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& checkpoint, const std::string& on,
             const std::string& filter, const std::string& loss_csv) {
    write_config_snapshot(cfg, cfg.out_dir);
    require_file("--checkpoint", checkpoint);
    ModelParams model = load_checkpoint(checkpoint);
    LoadedData data = load_data(cfg);
    LoadedResources res = load_resources(cfg);

    const Dataset* ds = &data.test;
    if (on == "full") {
        ds = &data.full;
    } else if (on == "train") {
        ds = &data.train;
    } else if (on == "valid") {
        ds = &data.valid;
    } else if (on != "test") {
        throw ConfigError("unknown --on value '" + on + "'");
    }
    Dataset filtered;
    if (!filter.empty()) {
        filtered = apply_filter(*ds, filter, res);
        ds = &filtered;
    }
    double acc = evaluate(model, *ds, cfg.threads);
    std::printf("dataset = %s\n", ds->name.c_str());
    std::printf("sentences = %zu\n", ds->size());
    std::printf("accuracy = %.17g\n", acc);

    if (!loss_csv.empty()) {
        auto prepared = prepare_dataset(*ds, model, res.lexicon, res.lists);
        std::vector<const PreparedSentence*> batch;
        for (const auto& p : prepared) batch.push_back(&p);
        BatchObjective obj = total_loss(batch, model, cfg.to_reg_config(), {}, cfg.threads);
        write_breakdown_csv(obj.breakdowns, loss_csv);
        std::printf("loss = %.17g\n", obj.loss);
    }
    return 0;
}

int cmd_ablate(const RunConfig& cfg, bool with_plain, bool subsets) {
    write_config_snapshot(cfg, cfg.out_dir);
    LoadedData data = load_data(cfg);
    LoadedResources res = load_resources(cfg);
    if (!cfg.embeddings_path.empty()) require_file("resources.embeddings", cfg.embeddings_path);
    EmbeddingTable table =
        load_embeddings(cfg.embeddings_path, collect_vocab(data), cfg.embed_dim, cfg.seed);

    AblationInputs in;
    in.train = &data.train;
    in.valid = &data.valid;
    in.test = &data.test;
    in.lexicon = &res.lexicon;
    in.lists = &res.lists;
    in.embeddings = &table;
    in.dims = Dims{cfg.dim, cfg.embed_dim, data.train.scheme.C};
    in.variant = cfg.model_variant();
    in.tcfg = cfg.to_train_config();

    Dataset neg_sub, int_sub;
    if (subsets) {
        neg_sub = extract_subset(data.test, RoleFilter::ContainsNegator, res.lists, res.lexicon);
        int_sub =
            extract_subset(data.test, RoleFilter::ContainsIntensifier, res.lists, res.lexicon);
        neg_sub.name = "neg_sub";
        int_sub.name = "int_sub";
        if (!neg_sub.sentences.empty()) in.extra_eval.emplace_back("neg_sub", &neg_sub);
        if (!int_sub.sentences.empty()) in.extra_eval.emplace_back("int_sub", &int_sub);
    }

    AblationSpec spec = AblationSpec::standard(cfg.to_reg_config(), with_plain);
    auto rows = run_ablation(spec, in);
    std::string path = cfg.out_dir + "/ablation.csv";
    write_ablation_csv(rows, path);
    for (const auto& r : rows) {
        std::printf("%s,%s,%.17g\n", r.config_id.c_str(), r.dataset.c_str(), r.accuracy);
    }
    std::printf("csv = %s\n", path.c_str());
    return 0;
}

int cmd_stats(const RunConfig& cfg, const std::string& csv_path) {
    write_config_snapshot(cfg, cfg.out_dir);
    LoadedData data = load_data(cfg);
    LoadedResources res = load_resources(cfg);
    CorpusStats st = corpus_stats(data.full, res.lists, res.lexicon);
    std::printf("dataset = %s\n", data.full.name.c_str());
    std::printf("sentences_total = %zu\n", st.total);
    std::printf("with_sentiment_word = %zu\n", st.with_sentiment);
    std::printf("with_negation_word = %zu\n", st.with_negation);
    std::printf("with_intensity_word = %zu\n", st.with_intensity);
    std::printf("skipped_empty_lines = %zu\n", data.full.skipped_empty);
    std::printf("truncated_sentences = %zu\n", data.full.truncated);
    if (!csv_path.empty()) {
        bool fresh = !fs::exists(csv_path);
        std::ofstream out(csv_path, std::ios::app);
        if (!out) throw IoError("cannot write CSV: " + csv_path);
        if (fresh) out << "dataset,total,with_sentiment,with_negation,with_intensity\n";
        out << data.full.name << ',' << st.total << ',' << st.with_sentiment << ','
            << st.with_negation << ',' << st.with_intensity << '\n';
    }
    return 0;
}

int cmd_subset(const RunConfig& cfg, const std::string& filter) {
    write_config_snapshot(cfg, cfg.out_dir);
    LoadedData data = load_data(cfg);
    LoadedResources res = load_resources(cfg);
    Dataset sub = apply_filter(data.full, filter, res);
    std::string path = cfg.out_dir + "/subset_" + filter + ".tsv";
    save_tsv(sub, path);
    std::printf("sentences = %zu\n", sub.size());
    std::printf("subset = %s\n", path.c_str());
    return 0;
}

int cmd_analyze_negation(const RunConfig& cfg, const std::string& checkpoint,
                         const std::string& word, int grid_size, int window, bool with_pairs) {
    write_config_snapshot(cfg, cfg.out_dir);
    require_file("--checkpoint", checkpoint);
    ModelParams model = load_checkpoint(checkpoint);

    std::vector<std::string> words;
    if (!word.empty()) {
        words.push_back(word);
    } else {
        for (const auto& [w, id] : model.neg_t) words.push_back(w);
    }
    for (const auto& w : words) {
        const Matrix& t = model.params.value(model.transform_id(RoleKind::Negator, w));
        auto points = negation_curve(t, grid_size);
        std::string path = cfg.out_dir + "/negation_curve_" + sanitize(w) + ".csv";
        write_curve_csv(points, path);
        std::printf("curve %s = %s\n", w.c_str(), path.c_str());
    }

    if (with_pairs) {
        LoadedData data = load_data(cfg);
        std::set<std::string> modifiers;
        for (const auto& w : words) modifiers.insert(w);
        auto pairs = extract_phrase_pairs(model, data.test, modifiers, window);
        std::string path = cfg.out_dir + "/negation_pairs.csv";
        write_pairs_csv(pairs, model.dims.C, path);
        std::printf("pairs = %zu\n", pairs.size());
        std::printf("pairs_csv = %s\n", path.c_str());
    }
    return 0;
}

int cmd_analyze_intensity(const RunConfig& cfg, const std::string& checkpoint,
                          const std::string& word, int window) {
    write_config_snapshot(cfg, cfg.out_dir);
    require_file("--checkpoint", checkpoint);
    ModelParams model = load_checkpoint(checkpoint);
    LoadedData data = load_data(cfg);

    std::set<std::string> modifiers;
    if (!word.empty()) {
        modifiers.insert(word);
    } else {
        for (const auto& [w, id] : model.int_t) modifiers.insert(w);
    }
    auto pairs = extract_phrase_pairs(model, data.test, modifiers, window);
    std::string pairs_path = cfg.out_dir + "/intensity_pairs.csv";
    write_pairs_csv(pairs, model.dims.C, pairs_path);

    std::vector<TransitionMatrix> matrices;
    for (const auto& w : modifiers) {
        TransitionMatrix tm = intensity_transitions(pairs, w, model.dims.C);
        if (tm.total() > 0) matrices.push_back(std::move(tm));
    }
    std::string matrix_path = cfg.out_dir + "/intensity_transitions.csv";
    write_matrix_csv(matrices, matrix_path);
    std::printf("pairs = %zu\n", pairs.size());
    std::printf("pairs_csv = %s\n", pairs_path.c_str());
    std::printf("matrix_csv = %s\n", matrix_path.c_str());
    return 0;
}

int cmd_gradcheck(const RunConfig& cfg, int classes, double h, double tol) {
    write_config_snapshot(cfg, cfg.out_dir);
    BuiltinGradCheck rep = builtin_gradcheck(cfg.seed, cfg.model_variant(), classes, h);
    std::printf("entries_checked = %zu\n", rep.entries_checked);
    std::printf("max_rel_err = %.17g\n", rep.max_rel_err);
    if (rep.max_rel_err > tol) {
        std::fprintf(stderr, "gradcheck FAILED: %.3g > %.3g (worst block %s)\n", rep.max_rel_err,
                     tol, rep.worst_block.c_str());
        return 1;
    }
    return 0;
}

int cmd_export_lexicon(const RunConfig& cfg, const std::string& source_a,
                       const std::string& source_b, const std::vector<std::string>& sst_leaves,
                       const std::string& output) {
    write_config_snapshot(cfg, cfg.out_dir);
    require_file("--source-a", source_a);
    ClassPairs a = load_class_pairs(source_a);

    ClassPairs b;
    if (!source_b.empty()) {
        require_file("--source-b", source_b);
        b = load_class_pairs(source_b);
    }
    if (!sst_leaves.empty()) {
        // Suggested SST leaf mapping: 0 strong_neg, 1 weak_neg, 3 weak_pos,
        // 4 strong_pos. Words seen with several mapped classes take the
        // majority; ties drop the word.
        std::map<std::string, std::array<size_t, 4>> counts;
        for (const auto& path : sst_leaves) {
            require_file("--sst-leaves", path);
            for (const auto& [word, label] : collect_sst_polar_leaves(path)) {
                int mapped = label == 0 ? 0 : label == 1 ? 1 : label == 3 ? 2 : 3;
                ++counts[word][static_cast<size_t>(mapped)];
            }
        }
        for (const auto& [word, tally] : counts) {
            size_t best = 0;
            bool tie = false;
            for (size_t c = 1; c < 4; ++c) {
                if (tally[c] > tally[best]) {
                    best = c;
                    tie = false;
                } else if (tally[c] == tally[best]) {
                    tie = true;
                }
            }
            if (!tie) b.emplace_back(word, static_cast<SentClass>(best));
        }
    }

    LexiconBuildStats stats;
    Lexicon lex = build_lexicon(a, b, &stats);
    std::string path = output.empty() ? cfg.out_dir + "/lexicon.tsv" : output;
    save_lexicon(lex, path);
    std::printf("kept = %zu\n", stats.kept);
    std::printf("dropped_conflicts = %zu\n", stats.dropped_conflicts);
    std::printf("lexicon = %s\n", path.c_str());
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"linguistically regularized LSTM sentiment classifier"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "print help for every subcommand");

    Flags f_train, f_eval, f_ablate, f_stats, f_subset, f_neg, f_int, f_grad, f_export;

    auto* c_train = app.add_subcommand("train", "train a model and keep the best checkpoint");
    f_train.add_common(c_train);

    auto* c_eval = app.add_subcommand("eval", "evaluate a checkpoint");
    f_eval.add_common(c_eval);
    std::string eval_ckpt, eval_on = "test", eval_filter, eval_loss_csv;
    c_eval->add_option("--checkpoint", eval_ckpt, "model checkpoint")->required();
    c_eval->add_option("--on", eval_on, "full | train | valid | test (default test)");
    c_eval->add_option("--filter", eval_filter, "negation | intensity | sentiment");
    c_eval->add_option("--loss-csv", eval_loss_csv, "write per-position loss breakdown CSV");

    auto* c_ablate = app.add_subcommand("ablate", "train per regularizer-ablation config");
    f_ablate.add_common(c_ablate);
    bool with_plain = false, with_subsets = false;
    c_ablate->add_flag("--with-baseline", with_plain, "include the all-disabled baseline");
    c_ablate->add_flag("--subsets", with_subsets, "also evaluate negation/intensity subsets");

    auto* c_stats = app.add_subcommand("stats", "corpus statistics");
    f_stats.add_common(c_stats);
    std::string stats_csv;
    c_stats->add_option("--csv", stats_csv, "append one CSV row to this file");

    auto* c_subset = app.add_subcommand("subset", "extract a role-filtered sub-dataset");
    f_subset.add_common(c_subset);
    std::string subset_filter;
    c_subset->add_option("--filter", subset_filter, "negation | intensity | sentiment")
        ->required();

    auto* c_neg = app.add_subcommand("analyze-negation", "negation curves and phrase pairs");
    f_neg.add_common(c_neg);
    std::string neg_ckpt, neg_word;
    int neg_grid = 101, neg_window = 0;
    bool neg_pairs = false;
    c_neg->add_option("--checkpoint", neg_ckpt, "model checkpoint")->required();
    c_neg->add_option("--word", neg_word, "restrict to one negator");
    c_neg->add_option("--grid-size", neg_grid, "curve grid points (default 101)");
    c_neg->add_option("--window", neg_window, "bound base phrases to N tokens (0 = to end)");
    c_neg->add_flag("--pairs", neg_pairs, "also score phrase pairs over the test data");

    auto* c_int = app.add_subcommand("analyze-intensity", "intensity transition matrices");
    f_int.add_common(c_int);
    std::string int_ckpt, int_word;
    int int_window = 0;
    c_int->add_option("--checkpoint", int_ckpt, "model checkpoint")->required();
    c_int->add_option("--word", int_word, "restrict to one intensifier");
    c_int->add_option("--window", int_window, "bound base phrases to N tokens (0 = to end)");

    auto* c_grad = app.add_subcommand("gradcheck", "finite-difference check of the full loss");
    f_grad.add_common(c_grad);
    int grad_classes = 5;
    double grad_h = 1e-5, grad_tol = 1e-4;
    c_grad->add_option("--classes", grad_classes, "label count (2 or 5, default 5)");
    c_grad->add_option("--h", grad_h, "finite-difference step (default 1e-5)");
    c_grad->add_option("--tol", grad_tol, "max relative error accepted (default 1e-4)");

    auto* c_export = app.add_subcommand("export-lexicon", "merge lexicon sources");
    f_export.add_common(c_export);
    std::string exp_a, exp_b, exp_out;
    std::vector<std::string> exp_sst;
    c_export->add_option("--source-a", exp_a, "first word<TAB>class source")->required();
    c_export->add_option("--source-b", exp_b, "second word<TAB>class source");
    c_export->add_option("--sst-leaves", exp_sst, "SST tree files contributing polar leaves");
    c_export->add_option("--output", exp_out, "merged lexicon path");

    std::vector<std::string> argv_copy(args);
    try {
        std::vector<const char*> argv;
        argv.push_back("lrlstm");
        for (const auto& a : argv_copy) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_train->parsed()) return cmd_train(f_train.resolve());
        if (c_eval->parsed()) {
            return cmd_eval(f_eval.resolve(), eval_ckpt, eval_on, eval_filter, eval_loss_csv);
        }
        if (c_ablate->parsed()) return cmd_ablate(f_ablate.resolve(), with_plain, with_subsets);
        if (c_stats->parsed()) return cmd_stats(f_stats.resolve(), stats_csv);
        if (c_subset->parsed()) return cmd_subset(f_subset.resolve(), subset_filter);
        if (c_neg->parsed()) {
            return cmd_analyze_negation(f_neg.resolve(), neg_ckpt, neg_word, neg_grid, neg_window,
                                        neg_pairs);
        }
        if (c_int->parsed()) {
            return cmd_analyze_intensity(f_int.resolve(), int_ckpt, int_word, int_window);
        }
        if (c_grad->parsed()) {
            return cmd_gradcheck(f_grad.resolve(), grad_classes, grad_h, grad_tol);
        }
        if (c_export->parsed()) {
            return cmd_export_lexicon(f_export.resolve(), exp_a, exp_b, exp_sst, exp_out);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

}  // namespace lrlstm
