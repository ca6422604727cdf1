#pragma once

#include <string>
#include <vector>

#include "lrlstm/train.hpp"

namespace lrlstm {

// Sentence-level accuracy: argmax prediction vs gold, ties broken toward the
// lower class index, no dropout.
double evaluate(const ModelParams& m, const Dataset& ds, int threads = 1);
double evaluate_prepared(const ModelParams& m, const std::vector<PreparedSentence>& prepared,
                         int threads = 1);

// Forward-only prediction for a token sequence (words resolved against the
// model vocabulary, unknown words to "<unk>" when present).
ProbDist predict_tokens(const ModelParams& m, const std::vector<std::string>& tokens);

struct AblationConfig {
    std::string id;  // e.g. "full", "-nsr", "plain"
    RegularizerConfig reg;
};

struct AblationSpec {
    std::vector<AblationConfig> configs;

    // The all-enabled baseline plus one config per disabled regularizer;
    // with_plain adds a config with every regularizer off.
    static AblationSpec standard(const RegularizerConfig& base, bool with_plain);
};

struct AblationRow {
    std::string config_id;
    std::string dataset;
    double accuracy = 0.0;
};

struct AblationInputs {
    const Dataset* train = nullptr;
    const Dataset* valid = nullptr;
    const Dataset* test = nullptr;
    const Lexicon* lexicon = nullptr;
    const WordLists* lists = nullptr;
    const EmbeddingTable* embeddings = nullptr;  // initial table, copied per config
    Dims dims;
    Variant variant = Variant::Lstm;
    TrainConfig tcfg;  // reg flags come from each AblationConfig
    // extra evaluation datasets, e.g. negation/intensity subsets
    std::vector<std::pair<std::string, const Dataset*>> extra_eval;
};

// Trains one model per configuration with identical seeds and reports
// test-set accuracy (plus any extra datasets).
std::vector<AblationRow> run_ablation(const AblationSpec& spec, const AblationInputs& in,
                                      TrainLog* last_log = nullptr);

struct CurvePoint {
    double x = 0.0;
    Vec mapped;  // softmax(T * family(x)), length C
};

// Sweeps x over a uniform grid on [0, 1]; the input family interpolates
// between the most-negative and most-positive one-hot distributions (for
// C = 2 this is [1-x, x] and mapped[1] is the curve's y).
std::vector<CurvePoint> negation_curve(const Matrix& transform, int grid_size);

struct PhrasePair {
    int sentence_id = 0;
    int position = 0;  // index of the modifier's final token
    std::string modifier;
    int base_label = 0;
    int modified_label = 0;
    double base_score = 0.0;      // P(positive), 2-class schemes only
    double modified_score = 0.0;
};

// For every modifier occurrence: base = the token suffix after the modifier
// (bounded by `window` tokens when window > 0), modified = modifier ++ base.
// Both fragments are scored with the model; pairs with an empty base are
// skipped.
std::vector<PhrasePair> extract_phrase_pairs(const ModelParams& m, const Dataset& ds,
                                             const std::set<std::string>& modifiers,
                                             int window = 0);

struct TransitionMatrix {
    std::string word;
    int C = 0;
    std::vector<int> counts;  // row-major C x C

    int at(int i, int j) const { return counts[static_cast<size_t>(i) * C + j]; }
    int total() const;
};

// counts[i][j] += 1 for each pair of `word` whose base argmax label is i and
// modified argmax label is j.
TransitionMatrix intensity_transitions(const std::vector<PhrasePair>& pairs,
                                       const std::string& word, int C);

// --- CSV emitters ---
void write_curve_csv(const std::vector<CurvePoint>& points, const std::string& path);
void write_pairs_csv(const std::vector<PhrasePair>& pairs, int C, const std::string& path);
void write_matrix_csv(const std::vector<TransitionMatrix>& matrices, const std::string& path);
void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& path);
void write_breakdown_csv(const std::vector<SentenceBreakdown>& rows, const std::string& path);

}  // namespace lrlstm
