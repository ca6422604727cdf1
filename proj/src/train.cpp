#include "lrlstm/train.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "lrlstm/analysis.hpp"
#include "lrlstm/rng.hpp"

namespace lrlstm {

OptimizerState::OptimizerState(const ParamSet& params) {
    accum.reserve(static_cast<size_t>(params.count()));
    for (int i = 0; i < params.count(); ++i) {
        const Matrix& v = params.value(i);
        accum.emplace_back(v.rows, v.cols);
    }
}

void adagrad_step(Matrix& param, const Matrix& grad, Matrix& accum, double lr) {
    require_same_shape(param, grad, "adagrad_step");
    require_same_shape(param, accum, "adagrad_step");
    for (size_t k = 0; k < param.data.size(); ++k) {
        double g = grad.data[k];
        if (!std::isfinite(g)) throw NumericError("adagrad_step: non-finite gradient");
        if (g == 0.0) continue;
        accum.data[k] += g * g;
        param.data[k] -= lr * g / (std::sqrt(accum.data[k]) + kAdagradEps);
    }
}

void sgd_embedding_step(Matrix& embeddings, const std::map<int, Vec>& row_grads, double lr) {
    for (const auto& [row, g] : row_grads) {
        if (row < 0 || row >= embeddings.rows ||
            g.size() != static_cast<size_t>(embeddings.cols)) {
            throw DimensionError("sgd_embedding_step: bad row gradient");
        }
        auto r = embeddings.row(row);
        for (size_t k = 0; k < g.size(); ++k) r[k] -= lr * g[k];
    }
}

TrainResult train(const std::vector<PreparedSentence>& train_set,
                  const std::vector<PreparedSentence>& valid_set, ModelParams& m,
                  const TrainConfig& cfg, const SentenceLossFn* custom_objective) {
    if (train_set.empty() || valid_set.empty()) {
        throw ConfigError("train: train and validation sets must be nonempty");
    }
    if (cfg.batch_size < 1) throw ConfigError("train: batch_size must be >= 1");

    TrainResult result;
    result.best_checkpoint = serialize_checkpoint(m);  // last-good fallback before any eval

    OptimizerState opt(m.params);
    Rng shuffle_rng(cfg.seed, "shuffle");
    Rng dropout_rng(cfg.seed, "dropout");

    std::vector<size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), size_t{0});
    size_t cursor = order.size();  // forces a shuffle before the first batch

    double loss_accum = 0.0;
    int losses_pending = 0;
    double best_acc = -1.0;

    auto run_eval = [&](int batch_idx) {
        double acc = evaluate_prepared(m, valid_set, cfg.threads);
        EvalRecord rec{batch_idx, losses_pending ? loss_accum / losses_pending : 0.0, acc};
        if (cfg.progress) {
            std::fprintf(stderr, "batch %d  loss %.6f  valid_acc %.4f\n", rec.batch,
                         rec.train_loss, rec.valid_acc);
        }
        result.log.records.push_back(rec);
        if (acc > best_acc) {
            best_acc = acc;
            result.log.best_index = static_cast<int>(result.log.records.size()) - 1;
            result.best_checkpoint = serialize_checkpoint(m);
        }
        loss_accum = 0.0;
        losses_pending = 0;
    };

    int mask_dim = m.h_dim();
    for (int b = 1; b <= cfg.max_batches; ++b) {
        std::vector<const PreparedSentence*> batch;
        batch.reserve(static_cast<size_t>(cfg.batch_size));
        for (int k = 0; k < cfg.batch_size; ++k) {
            if (cursor == order.size()) {
                shuffle_rng.shuffle(order);
                cursor = 0;
            }
            batch.push_back(&train_set[order[cursor++]]);
        }

        std::vector<DropoutMask> masks;
        if (cfg.dropout_p > 0.0) {
            masks.reserve(batch.size());
            for (size_t i = 0; i < batch.size(); ++i) {
                masks.push_back({dropout_rng.bernoulli_keep(static_cast<size_t>(mask_dim),
                                                            cfg.dropout_p),
                                 1.0 / (1.0 - cfg.dropout_p)});
            }
        }

        BatchObjective obj;
        try {
            obj = total_loss(batch, m, cfg.reg, masks, cfg.threads, custom_objective);
        } catch (const NumericError& e) {
            result.log.aborted = true;
            result.log.abort_reason = e.what();
            return result;
        }
        if (!std::isfinite(obj.loss) || !obj.grads.all_finite()) {
            result.log.aborted = true;
            result.log.abort_reason = "non-finite loss or gradient at batch " + std::to_string(b);
            return result;
        }

        if (cfg.clip) {
            double norm = std::sqrt(obj.grads.squared_norm());
            if (norm > cfg.clip_norm) {
                obj.grads.scale_all(cfg.clip_norm / norm);
            }
        }

        for (int id = 0; id < m.params.count(); ++id) {
            adagrad_step(m.params.value(id), obj.grads.dense[static_cast<size_t>(id)],
                         opt.accum[static_cast<size_t>(id)], cfg.adagrad_lr);
        }
        sgd_embedding_step(m.embeddings.vectors, obj.grads.embed, cfg.embed_lr);

        loss_accum += obj.loss;
        ++losses_pending;

        if (cfg.eval_every > 0 && b % cfg.eval_every == 0) {
            run_eval(b);
        }
    }

    bool final_pending = result.log.records.empty() ||
                         result.log.records.back().batch != cfg.max_batches;
    if (final_pending) run_eval(cfg.max_batches);
    return result;
}

void write_train_log_csv(const TrainLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write train log: " + path);
    out << "batch,loss,valid_acc\n";
    char buf[64];
    for (const auto& r : log.records) {
        out << r.batch << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.train_loss);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.valid_acc);
        out << buf << '\n';
    }
}

}  // namespace lrlstm
