#include "lrlstm/gradcheck.hpp"

#include <cmath>

namespace lrlstm {

namespace {

double probe(const std::function<double()>& loss_fn) {
    double v = loss_fn();
    if (!std::isfinite(v)) {
        throw NumericError("grad_check: non-finite loss at probe point");
    }
    return v;
}

}  // namespace

GradCheckReport grad_check(ParamSet& params,
                           Matrix* embeddings,
                           const std::vector<int>& embed_rows,
                           const std::function<double()>& loss_fn,
                           const Gradients& analytic,
                           double h) {
    GradCheckReport rep;

    auto check_entry = [&](double* slot, double analytic_g, const std::string& block, int index) {
        double orig = *slot;
        *slot = orig + h;
        double up = probe(loss_fn);
        *slot = orig - h;
        double down = probe(loss_fn);
        *slot = orig;
        double fd = (up - down) / (2.0 * h);
        double denom = std::max(std::abs(analytic_g), std::abs(fd));
        double err = std::abs(analytic_g - fd);
        if (denom >= 1e-8) err /= denom;
        if (err > rep.max_rel_err) {
            rep.max_rel_err = err;
            rep.worst_block = block;
            rep.worst_index = index;
        }
        ++rep.entries_checked;
    };

    for (int id = 0; id < params.count(); ++id) {
        Matrix& block = params.value(id);
        const Matrix& g = analytic.dense[static_cast<size_t>(id)];
        for (size_t k = 0; k < block.data.size(); ++k) {
            check_entry(&block.data[k], g.data[k], params.name(id), static_cast<int>(k));
        }
    }

    if (embeddings) {
        Vec zero(static_cast<size_t>(embeddings->cols), 0.0);
        for (int row : embed_rows) {
            auto it = analytic.embed.find(row);
            const Vec& g = it == analytic.embed.end() ? zero : it->second;
            for (int c = 0; c < embeddings->cols; ++c) {
                check_entry(&embeddings->at(row, c), g[static_cast<size_t>(c)],
                            "embedding[" + std::to_string(row) + "]", c);
            }
        }
    }

    return rep;
}

}  // namespace lrlstm
