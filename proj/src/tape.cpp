#include "lrlstm/tape.hpp"

#include <algorithm>
#include <cmath>

namespace lrlstm {

void Gradients::accumulate(const Gradients& o) {
    for (size_t i = 0; i < dense.size(); ++i) {
        const auto& src = o.dense[i].data;
        auto& dst = dense[i].data;
        for (size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
    for (const auto& [row, g] : o.embed) {
        auto& dst = embed[row];
        if (dst.empty()) dst.assign(g.size(), 0.0);
        for (size_t k = 0; k < g.size(); ++k) dst[k] += g[k];
    }
}

void Gradients::scale_all(double s) {
    for (auto& m : dense) {
        for (double& v : m.data) v *= s;
    }
    for (auto& [row, g] : embed) {
        for (double& v : g) v *= s;
    }
}

double Gradients::squared_norm() const {
    double acc = 0.0;
    for (const auto& m : dense) {
        for (double v : m.data) acc += v * v;
    }
    for (const auto& [row, g] : embed) {
        for (double v : g) acc += v * v;
    }
    return acc;
}

bool Gradients::all_finite() const {
    for (const auto& m : dense) {
        if (!m.all_finite()) return false;
    }
    for (const auto& [row, g] : embed) {
        for (double v : g) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

NodeRef Tape::constant(Vec v) {
    Node n;
    n.op = Op::Constant;
    n.val = std::move(v);
    return {push(std::move(n))};
}

NodeRef Tape::zeros(int dim) { return constant(Vec(static_cast<size_t>(dim), 0.0)); }

NodeRef Tape::embed_row(int row) {
    Node n;
    n.op = Op::EmbedRow;
    n.param = row;
    auto r = embeddings_->row(row);
    n.val.assign(r.begin(), r.end());
    return {push(std::move(n))};
}

NodeRef Tape::param_vec(int id) {
    const Matrix& m = params_->value(id);
    if (m.cols != 1) throw DimensionError("param_vec: block is not a vector");
    Node n;
    n.op = Op::ParamVec;
    n.param = id;
    n.val = m.data;
    return {push(std::move(n))};
}

NodeRef Tape::matvec(int param_id, NodeRef x, int col_off) {
    const Matrix& w = params_->value(param_id);
    const Vec& xv = val_of(x);
    int k = static_cast<int>(xv.size());
    if (col_off < 0 || col_off + k > w.cols) {
        throw DimensionError("matvec: column range exceeds " + params_->name(param_id));
    }
    Node n;
    n.op = Op::MatVec;
    n.a = x.idx;
    n.param = param_id;
    n.aux = col_off;
    n.val.assign(static_cast<size_t>(w.rows), 0.0);
    for (int r = 0; r < w.rows; ++r) {
        const double* wr = w.data.data() + static_cast<size_t>(r) * w.cols + col_off;
        double acc = 0.0;
        for (int j = 0; j < k; ++j) acc += wr[j] * xv[j];
        n.val[static_cast<size_t>(r)] = acc;
    }
    return {push(std::move(n))};
}

NodeRef Tape::add(NodeRef a, NodeRef b) {
    const Vec& av = val_of(a);
    const Vec& bv = val_of(b);
    if (av.size() != bv.size()) throw DimensionError("add: length mismatch");
    Node n;
    n.op = Op::Add;
    n.a = a.idx;
    n.b = b.idx;
    n.val.resize(av.size());
    for (size_t i = 0; i < av.size(); ++i) n.val[i] = av[i] + bv[i];
    return {push(std::move(n))};
}

NodeRef Tape::add_param(NodeRef a, int param_id) {
    const Vec& av = val_of(a);
    const Matrix& p = params_->value(param_id);
    if (p.cols != 1 || static_cast<size_t>(p.rows) != av.size()) {
        throw DimensionError("add_param: shape mismatch with " + params_->name(param_id));
    }
    Node n;
    n.op = Op::AddParam;
    n.a = a.idx;
    n.param = param_id;
    n.val.resize(av.size());
    for (size_t i = 0; i < av.size(); ++i) n.val[i] = av[i] + p.data[i];
    return {push(std::move(n))};
}

NodeRef Tape::mul(NodeRef a, NodeRef b) {
    const Vec& av = val_of(a);
    const Vec& bv = val_of(b);
    if (av.size() != bv.size()) throw DimensionError("mul: length mismatch");
    Node n;
    n.op = Op::Mul;
    n.a = a.idx;
    n.b = b.idx;
    n.val.resize(av.size());
    for (size_t i = 0; i < av.size(); ++i) n.val[i] = av[i] * bv[i];
    return {push(std::move(n))};
}

NodeRef Tape::sigmoid(NodeRef a) {
    const Vec& av = val_of(a);
    Node n;
    n.op = Op::Sigmoid;
    n.a = a.idx;
    n.val.resize(av.size());
    for (size_t i = 0; i < av.size(); ++i) n.val[i] = 1.0 / (1.0 + std::exp(-av[i]));
    return {push(std::move(n))};
}

NodeRef Tape::tanh(NodeRef a) {
    const Vec& av = val_of(a);
    Node n;
    n.op = Op::Tanh;
    n.a = a.idx;
    n.val.resize(av.size());
    for (size_t i = 0; i < av.size(); ++i) n.val[i] = std::tanh(av[i]);
    return {push(std::move(n))};
}

NodeRef Tape::softmax(NodeRef a) {
    Node n;
    n.op = Op::Softmax;
    n.a = a.idx;
    n.val = lrlstm::softmax(val_of(a)).p;
    return {push(std::move(n))};
}

NodeRef Tape::floor_normalize(NodeRef a, double eps) {
    const Vec& av = val_of(a);
    Node n;
    n.op = Op::FloorNorm;
    n.a = a.idx;
    n.x0 = eps;
    n.saved.resize(av.size());  // 1.0 where the input passed through unclamped
    double sum = 0.0;
    n.val.resize(av.size());
    for (size_t i = 0; i < av.size(); ++i) {
        bool open = av[i] > eps;
        n.saved[i] = open ? 1.0 : 0.0;
        n.val[i] = open ? av[i] : eps;
        sum += n.val[i];
    }
    for (double& v : n.val) v /= sum;
    // stash the pre-normalization sum for backward
    n.saved.push_back(sum);
    return {push(std::move(n))};
}

NodeRef Tape::concat(NodeRef a, NodeRef b) {
    const Vec& av = val_of(a);
    const Vec& bv = val_of(b);
    Node n;
    n.op = Op::Concat;
    n.a = a.idx;
    n.b = b.idx;
    n.val.reserve(av.size() + bv.size());
    n.val.insert(n.val.end(), av.begin(), av.end());
    n.val.insert(n.val.end(), bv.begin(), bv.end());
    n.aux = static_cast<int>(av.size());
    return {push(std::move(n))};
}

NodeRef Tape::dropout(NodeRef a, const std::vector<uint8_t>& keep, double inv_keep) {
    const Vec& av = val_of(a);
    if (keep.size() != av.size()) throw DimensionError("dropout: mask length mismatch");
    Node n;
    n.op = Op::Dropout;
    n.a = a.idx;
    n.x0 = inv_keep;
    n.val.resize(av.size());
    n.saved.resize(av.size());
    for (size_t i = 0; i < av.size(); ++i) {
        n.saved[i] = keep[i] ? 1.0 : 0.0;
        n.val[i] = keep[i] ? av[i] * inv_keep : 0.0;
    }
    return {push(std::move(n))};
}

NodeRef Tape::neg_log_at(NodeRef dist, int index) {
    const Vec& dv = val_of(dist);
    if (index < 0 || static_cast<size_t>(index) >= dv.size()) {
        throw DimensionError("neg_log_at: index out of range");
    }
    Node n;
    n.op = Op::NegLogAt;
    n.a = dist.idx;
    n.aux = index;
    n.val = {-std::log(dv[static_cast<size_t>(index)])};
    return {push(std::move(n))};
}

NodeRef Tape::sym_kl(NodeRef p, NodeRef q) {
    const Vec& pv = val_of(p);
    const Vec& qv = val_of(q);
    if (pv.size() != qv.size()) throw DimensionError("sym_kl: length mismatch");
    Node n;
    n.op = Op::SymKl;
    n.a = p.idx;
    n.b = q.idx;
    n.val = {lrlstm::sym_kl(ProbDist{pv}, ProbDist{qv})};
    return {push(std::move(n))};
}

NodeRef Tape::hinge(NodeRef x, double margin) {
    Node n;
    n.op = Op::Hinge;
    n.a = x.idx;
    n.x0 = margin;
    n.val = {margin_hinge(val_of(x)[0], margin)};
    return {push(std::move(n))};
}

NodeRef Tape::min_select(NodeRef a, NodeRef b, int* chosen_out) {
    double av = val_of(a)[0];
    double bv = val_of(b)[0];
    Node n;
    n.op = Op::MinSelect;
    n.a = a.idx;
    n.b = b.idx;
    n.aux = bv < av ? 1 : 0;
    n.val = {n.aux ? bv : av};
    if (chosen_out) *chosen_out = n.aux;
    return {push(std::move(n))};
}

NodeRef Tape::scale(NodeRef a, double s) {
    const Vec& av = val_of(a);
    Node n;
    n.op = Op::Scale;
    n.a = a.idx;
    n.x0 = s;
    n.val.resize(av.size());
    for (size_t i = 0; i < av.size(); ++i) n.val[i] = av[i] * s;
    return {push(std::move(n))};
}

NodeRef Tape::sum(std::span<const NodeRef> scalars) {
    Node n;
    n.op = Op::Sum;
    double acc = 0.0;
    n.multi.reserve(scalars.size());
    for (NodeRef r : scalars) {
        acc += val_of(r)[0];
        n.multi.push_back(r.idx);
    }
    n.val = {acc};
    return {push(std::move(n))};
}

void Tape::backward(NodeRef root, Gradients& g) {
    if (!root.valid()) return;
    size_t nroot = static_cast<size_t>(root.idx);
    std::vector<Vec> adj(nroot + 1);
    adj[nroot].assign(1, 1.0);

    auto touch = [&](int idx, size_t dim) -> Vec& {
        Vec& a = adj[static_cast<size_t>(idx)];
        if (a.empty()) a.assign(dim, 0.0);
        return a;
    };

    for (size_t i = nroot + 1; i-- > 0;) {
        const Node& n = nodes_[i];
        const Vec& na = adj[i];
        if (na.empty()) continue;
        switch (n.op) {
            case Op::Constant:
                break;
            case Op::EmbedRow: {
                auto& dst = g.embed[n.param];
                if (dst.empty()) dst.assign(n.val.size(), 0.0);
                for (size_t k = 0; k < n.val.size(); ++k) dst[k] += na[k];
                break;
            }
            case Op::ParamVec: {
                auto& dst = g.dense[static_cast<size_t>(n.param)].data;
                for (size_t k = 0; k < n.val.size(); ++k) dst[k] += na[k];
                break;
            }
            case Op::MatVec: {
                const Matrix& w = params_->value(n.param);
                Matrix& dw = g.dense[static_cast<size_t>(n.param)];
                const Vec& xv = nodes_[static_cast<size_t>(n.a)].val;
                Vec& dx = touch(n.a, xv.size());
                int k = static_cast<int>(xv.size());
                for (int r = 0; r < w.rows; ++r) {
                    double ar = na[static_cast<size_t>(r)];
                    if (ar == 0.0) continue;
                    const double* wr = w.data.data() + static_cast<size_t>(r) * w.cols + n.aux;
                    double* dwr = dw.data.data() + static_cast<size_t>(r) * w.cols + n.aux;
                    for (int j = 0; j < k; ++j) {
                        dwr[j] += ar * xv[static_cast<size_t>(j)];
                        dx[static_cast<size_t>(j)] += ar * wr[j];
                    }
                }
                break;
            }
            case Op::Add: {
                Vec& da = touch(n.a, n.val.size());
                Vec& db = touch(n.b, n.val.size());
                for (size_t k = 0; k < n.val.size(); ++k) {
                    da[k] += na[k];
                    db[k] += na[k];
                }
                break;
            }
            case Op::AddParam: {
                Vec& da = touch(n.a, n.val.size());
                auto& dp = g.dense[static_cast<size_t>(n.param)].data;
                for (size_t k = 0; k < n.val.size(); ++k) {
                    da[k] += na[k];
                    dp[k] += na[k];
                }
                break;
            }
            case Op::Mul: {
                const Vec& av = nodes_[static_cast<size_t>(n.a)].val;
                const Vec& bv = nodes_[static_cast<size_t>(n.b)].val;
                Vec& da = touch(n.a, av.size());
                Vec& db = touch(n.b, bv.size());
                for (size_t k = 0; k < n.val.size(); ++k) {
                    da[k] += na[k] * bv[k];
                    db[k] += na[k] * av[k];
                }
                break;
            }
            case Op::Sigmoid: {
                Vec& da = touch(n.a, n.val.size());
                for (size_t k = 0; k < n.val.size(); ++k) {
                    double y = n.val[k];
                    da[k] += na[k] * y * (1.0 - y);
                }
                break;
            }
            case Op::Tanh: {
                Vec& da = touch(n.a, n.val.size());
                for (size_t k = 0; k < n.val.size(); ++k) {
                    double y = n.val[k];
                    da[k] += na[k] * (1.0 - y * y);
                }
                break;
            }
            case Op::Softmax: {
                Vec& da = touch(n.a, n.val.size());
                double dot = 0.0;
                for (size_t k = 0; k < n.val.size(); ++k) dot += na[k] * n.val[k];
                for (size_t k = 0; k < n.val.size(); ++k) da[k] += n.val[k] * (na[k] - dot);
                break;
            }
            case Op::FloorNorm: {
                Vec& da = touch(n.a, n.val.size());
                double sum = n.saved.back();
                double dot = 0.0;
                for (size_t k = 0; k < n.val.size(); ++k) dot += na[k] * n.val[k];
                for (size_t k = 0; k < n.val.size(); ++k) {
                    if (n.saved[k] != 0.0) da[k] += (na[k] - dot) / sum;
                }
                break;
            }
            case Op::Concat: {
                size_t split = static_cast<size_t>(n.aux);
                Vec& da = touch(n.a, split);
                Vec& db = touch(n.b, n.val.size() - split);
                for (size_t k = 0; k < split; ++k) da[k] += na[k];
                for (size_t k = split; k < n.val.size(); ++k) db[k - split] += na[k];
                break;
            }
            case Op::Dropout: {
                Vec& da = touch(n.a, n.val.size());
                for (size_t k = 0; k < n.val.size(); ++k) {
                    da[k] += na[k] * n.saved[k] * n.x0;
                }
                break;
            }
            case Op::NegLogAt: {
                const Vec& dv = nodes_[static_cast<size_t>(n.a)].val;
                Vec& da = touch(n.a, dv.size());
                da[static_cast<size_t>(n.aux)] -= na[0] / dv[static_cast<size_t>(n.aux)];
                break;
            }
            case Op::SymKl: {
                const Vec& pv = nodes_[static_cast<size_t>(n.a)].val;
                const Vec& qv = nodes_[static_cast<size_t>(n.b)].val;
                Vec& dp = touch(n.a, pv.size());
                Vec& dq = touch(n.b, qv.size());
                for (size_t k = 0; k < pv.size(); ++k) {
                    double r = std::log(pv[k]) - std::log(qv[k]);
                    dp[k] += na[0] * 0.5 * (r + 1.0 - qv[k] / pv[k]);
                    dq[k] += na[0] * 0.5 * (-r + 1.0 - pv[k] / qv[k]);
                }
                break;
            }
            case Op::Hinge: {
                const Vec& xv = nodes_[static_cast<size_t>(n.a)].val;
                Vec& da = touch(n.a, 1);
                if (xv[0] > n.x0) da[0] += na[0];
                break;
            }
            case Op::MinSelect: {
                int chosen = n.aux ? n.b : n.a;
                Vec& dc = touch(chosen, 1);
                dc[0] += na[0];
                break;
            }
            case Op::Scale: {
                Vec& da = touch(n.a, n.val.size());
                for (size_t k = 0; k < n.val.size(); ++k) da[k] += na[k] * n.x0;
                break;
            }
            case Op::Sum: {
                for (int src : n.multi) {
                    Vec& ds = touch(src, 1);
                    ds[0] += na[0];
                }
                break;
            }
        }
    }
}

}  // namespace lrlstm
