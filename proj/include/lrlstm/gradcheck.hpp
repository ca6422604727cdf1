#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lrlstm/tape.hpp"

namespace lrlstm {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_block;
    int worst_index = -1;
    size_t entries_checked = 0;
};

// Compares analytic gradients against central finite differences
// (f(x+h) - f(x-h)) / 2h for every entry of every parameter block, plus the
// listed embedding rows. loss_fn must re-evaluate the loss at the current
// (possibly perturbed) parameter values. Relative error falls back to
// absolute error when max(|analytic|, |fd|) < 1e-8. Throws NumericError if
// any probe produces a non-finite loss.
GradCheckReport grad_check(ParamSet& params,
                           Matrix* embeddings,
                           const std::vector<int>& embed_rows,
                           const std::function<double()>& loss_fn,
                           const Gradients& analytic,
                           double h);

}  // namespace lrlstm
