#include "lrlstm/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace lrlstm {

ProbDist softmax(std::span<const double> v) {
    if (v.empty()) {
        throw DimensionError("softmax: empty input");
    }
    double mx = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(mx)) {
        throw NumericError("softmax: non-finite input");
    }
    ProbDist out;
    out.p.resize(v.size());
    double sum = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        out.p[i] = std::exp(v[i] - mx);
        sum += out.p[i];
    }
    for (double& x : out.p) x /= sum;
    return out;
}

ProbDist floor_normalize(std::span<const double> v, double eps) {
    if (v.empty()) {
        throw DimensionError("floor_normalize: empty input");
    }
    ProbDist out;
    out.p.resize(v.size());
    double sum = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        out.p[i] = v[i] > eps ? v[i] : eps;
        sum += out.p[i];
    }
    for (double& x : out.p) x /= sum;
    return out;
}

double sym_kl(const ProbDist& p, const ProbDist& q) {
    if (p.size() != q.size()) {
        throw DimensionError("sym_kl: length mismatch");
    }
    double acc = 0.0;
    for (int l = 0; l < p.size(); ++l) {
        // (p-q)*(log p - log q): both factors negate exactly under swap,
        // so sym_kl(p,q) == sym_kl(q,p) bitwise.
        double r = std::log(p[l]) - std::log(q[l]);
        acc += (p[l] - q[l]) * r;
    }
    return 0.5 * acc;
}

int argmax_low_tie(std::span<const double> v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

}  // namespace lrlstm
