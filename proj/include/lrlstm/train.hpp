#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrlstm/regularizers.hpp"

namespace lrlstm {

struct TrainConfig {
    double adagrad_lr = 0.1;
    double embed_lr = 0.2;
    double dropout_p = 0.5;
    int batch_size = 25;
    int max_batches = 3000;
    int eval_every = 100;
    int threads = 1;
    uint64_t seed = 1;
    bool clip = true;
    double clip_norm = 5.0;
    bool progress = false;  // eval records to stderr as they happen
    RegularizerConfig reg;
};

struct OptimizerState {
    std::vector<Matrix> accum;  // squared-gradient accumulators, non-embedding params

    OptimizerState() = default;
    explicit OptimizerState(const ParamSet& params);
};

inline constexpr double kAdagradEps = 1e-6;

// G += g^2; theta -= lr * g / (sqrt(G) + eps), elementwise.
void adagrad_step(Matrix& param, const Matrix& grad, Matrix& accum, double lr);

// Plain SGD on exactly the embedding rows that carried gradient; all other
// rows stay bit-identical.
void sgd_embedding_step(Matrix& embeddings, const std::map<int, Vec>& row_grads, double lr);

struct EvalRecord {
    int batch = 0;
    double train_loss = 0.0;  // mean batch loss since the previous record
    double valid_acc = 0.0;
};

struct TrainLog {
    std::vector<EvalRecord> records;
    int best_index = -1;  // record with the highest validation accuracy (earliest on ties)
    bool aborted = false;
    std::string abort_reason;
};

struct TrainResult {
    std::vector<uint8_t> best_checkpoint;
    TrainLog log;
};

// Mini-batch training: seeded reshuffle at every epoch boundary, a fresh
// dropout mask per sentence visit, AdaGrad on model parameters and plain SGD
// on embeddings, validation every eval_every batches and after the final
// batch. Returns the checkpoint with the best validation accuracy. A
// non-finite loss or gradient aborts, retaining the last good checkpoint.
TrainResult train(const std::vector<PreparedSentence>& train_set,
                  const std::vector<PreparedSentence>& valid_set, ModelParams& m,
                  const TrainConfig& cfg, const SentenceLossFn* custom_objective = nullptr);

void write_train_log_csv(const TrainLog& log, const std::string& path);

}  // namespace lrlstm
