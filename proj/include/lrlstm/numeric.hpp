#pragma once

#include <span>

#include "lrlstm/matrix.hpp"

namespace lrlstm {

// Probability floor: distributions are clamped elementwise to at least this
// value and renormalized before any log, keeping gradients bounded near the
// simplex boundary.
inline constexpr double kProbFloor = 1e-8;

// Distribution over sentiment labels. Entries are >= kProbFloor and sum to 1
// within 1e-9 when produced by softmax() or floor_normalize().
struct ProbDist {
    Vec p;

    int size() const { return static_cast<int>(p.size()); }
    double operator[](int i) const { return p[static_cast<size_t>(i)]; }
};

// Numerically stable softmax (max-subtraction). Throws DimensionError on
// empty input.
ProbDist softmax(std::span<const double> v);

// Clamp entries to at least eps, then renormalize to sum 1.
ProbDist floor_normalize(std::span<const double> v, double eps = kProbFloor);

// Symmetric KL divergence in nats: 0.5 * [KL(p||q) + KL(q||p)].
// Requires equal lengths; both inputs must lie on the floored simplex.
double sym_kl(const ProbDist& p, const ProbDist& q);

// max(0, x - M). The subgradient at x == M is zero.
inline double margin_hinge(double x, double margin) {
    double d = x - margin;
    return d > 0.0 ? d : 0.0;
}

int argmax_low_tie(std::span<const double> v);

}  // namespace lrlstm
