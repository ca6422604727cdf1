#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>

#include "lrlstm/train.hpp"

namespace lrlstm {

// Resolved run configuration. File format: flat `key = value` lines grouped
// under [section] headers; '#' starts a comment. Unknown keys are errors.
struct RunConfig {
    // [data]
    std::string data_format = "mr";  // mr | sst | tsv
    std::string mr_pos;
    std::string mr_neg;
    std::string train_path;  // sst/tsv formats
    std::string valid_path;
    std::string test_path;
    int classes = 2;  // tsv only
    std::array<double, 3> split = {0.8, 0.1, 0.1};

    // [resources]
    std::string lexicon_path;
    std::string negators_path;      // empty -> packaged defaults
    std::string intensifiers_path;  // empty -> packaged defaults
    std::string embeddings_path;    // empty -> seeded noise init

    // [model]
    std::string variant = "lstm";
    int dim = 300;
    int embed_dim = 300;

    // [regularizers]
    double alpha = 0.5;
    double beta = 1e-4;
    double margin = 0.3;
    std::set<std::string> disabled;  // subset of {nsr, sr, nr, ir}

    // [train]
    uint64_t seed = 1;
    int batch_size = 25;
    int max_batches = 3000;
    int eval_every = 100;
    int threads = 1;
    double adagrad_lr = 0.1;
    double embed_lr = 0.2;
    double dropout = 0.5;
    bool clip = true;
    double clip_norm = 5.0;

    // [output]
    std::string out_dir = "lrlstm-out";

    TrainConfig to_train_config() const;
    RegularizerConfig to_reg_config() const;
    Variant model_variant() const { return variant_from_string(variant); }
};

// Defaults overlaid with the file's keys. Throws ConfigError for a missing
// file or unknown key, ParseError for malformed lines.
RunConfig load_run_config(const std::string& path);

// Applies one `section.key` (as flags do after the file pass).
void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Full resolved snapshot in the config file format.
std::string render_run_config(const RunConfig& cfg);

// Writes <dir>/config.resolved, creating the directory if needed.
void write_config_snapshot(const RunConfig& cfg, const std::string& dir);

}  // namespace lrlstm
