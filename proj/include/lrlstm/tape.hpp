#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrlstm/matrix.hpp"
#include "lrlstm/numeric.hpp"

namespace lrlstm {

// Named parameter blocks (weights, biases, shifting vectors, transformation
// matrices). Embeddings live outside: they take the sparse gradient path.
class ParamSet {
public:
    int add(std::string name, int rows, int cols) {
        blocks_.push_back({std::move(name), Matrix(rows, cols)});
        return static_cast<int>(blocks_.size()) - 1;
    }

    Matrix& value(int id) { return blocks_[static_cast<size_t>(id)].value; }
    const Matrix& value(int id) const { return blocks_[static_cast<size_t>(id)].value; }
    const std::string& name(int id) const { return blocks_[static_cast<size_t>(id)].name; }
    int count() const { return static_cast<int>(blocks_.size()); }

    size_t entry_count() const {
        size_t n = 0;
        for (const auto& b : blocks_) n += b.value.size();
        return n;
    }

private:
    struct Block {
        std::string name;
        Matrix value;
    };
    std::vector<Block> blocks_;
};

// Gradient accumulators: one dense block per parameter, plus a sparse
// row-indexed map for embeddings. The embed map is ordered so that every
// iteration over touched rows is deterministic.
struct Gradients {
    std::vector<Matrix> dense;
    std::map<int, Vec> embed;

    Gradients() = default;
    explicit Gradients(const ParamSet& params) { reset(params); }

    void reset(const ParamSet& params) {
        dense.clear();
        dense.reserve(static_cast<size_t>(params.count()));
        for (int i = 0; i < params.count(); ++i) {
            const Matrix& v = params.value(i);
            dense.emplace_back(v.rows, v.cols);
        }
        embed.clear();
    }

    void accumulate(const Gradients& o);
    void scale_all(double s);
    double squared_norm() const;
    bool all_finite() const;
};

struct NodeRef {
    int idx = -1;
    bool valid() const { return idx >= 0; }
};

// Reverse-mode gradient tape over vector-valued nodes. Forward values are
// computed eagerly at recording time; backward() replays the recorded ops
// exactly once each, in reverse order, accumulating parameter gradients
// keyed by parameter identity. One tape per thread; no internal locking.
class Tape {
public:
    explicit Tape(const ParamSet* params, const Matrix* embeddings = nullptr)
        : params_(params), embeddings_(embeddings) {}

    void clear() { nodes_.clear(); }
    size_t size() const { return nodes_.size(); }

    NodeRef constant(Vec v);
    NodeRef zeros(int dim);
    NodeRef embed_row(int row);
    NodeRef param_vec(int id);

    // y = W[:, col_off : col_off + dim(x)] * x for parameter matrix W.
    NodeRef matvec(int param_id, NodeRef x, int col_off = 0);

    NodeRef add(NodeRef a, NodeRef b);
    NodeRef add_param(NodeRef a, int param_id);  // a + bias vector
    NodeRef mul(NodeRef a, NodeRef b);
    NodeRef sigmoid(NodeRef a);
    NodeRef tanh(NodeRef a);
    NodeRef softmax(NodeRef a);
    NodeRef floor_normalize(NodeRef a, double eps = kProbFloor);
    NodeRef concat(NodeRef a, NodeRef b);
    NodeRef dropout(NodeRef a, const std::vector<uint8_t>& keep, double inv_keep);

    // Scalar-valued nodes (dim 1).
    NodeRef neg_log_at(NodeRef dist, int index);
    NodeRef sym_kl(NodeRef p, NodeRef q);
    NodeRef hinge(NodeRef x, double margin);
    // min of two scalars; ties choose `a` (the previous-position branch).
    // chosen_out, when given, receives 0 for a and 1 for b.
    NodeRef min_select(NodeRef a, NodeRef b, int* chosen_out = nullptr);
    NodeRef scale(NodeRef a, double s);
    NodeRef sum(std::span<const NodeRef> scalars);

    const Vec& value(NodeRef n) const { return nodes_[static_cast<size_t>(n.idx)].val; }
    double scalar(NodeRef n) const { return nodes_[static_cast<size_t>(n.idx)].val[0]; }

    // Seeds d(root) = 1 and accumulates into g. Adjoint buffers are local to
    // the call, so backward over several roots adds up (tape linearity).
    void backward(NodeRef root, Gradients& g);

private:
    enum class Op : uint8_t {
        Constant,
        EmbedRow,
        ParamVec,
        MatVec,
        Add,
        AddParam,
        Mul,
        Sigmoid,
        Tanh,
        Softmax,
        FloorNorm,
        Concat,
        Dropout,
        NegLogAt,
        SymKl,
        Hinge,
        MinSelect,
        Scale,
        Sum,
    };

    struct Node {
        Op op;
        int a = -1;
        int b = -1;
        int param = -1;  // param block id, or embedding row for EmbedRow
        int aux = 0;     // col offset / gold index / chosen branch
        double x0 = 0.0; // margin / scale / floor eps
        Vec val;
        Vec saved;              // op-specific (clamp mask, dropout mask)
        std::vector<int> multi; // Sum inputs
    };

    int push(Node n) {
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    const Vec& val_of(NodeRef n) const { return nodes_[static_cast<size_t>(n.idx)].val; }

    const ParamSet* params_;
    const Matrix* embeddings_;
    std::vector<Node> nodes_;
};

}  // namespace lrlstm
