#pragma once

#include <functional>
#include <optional>

#include "lrlstm/model.hpp"

namespace lrlstm {

struct RegularizerConfig {
    double alpha = 0.5;   // weight of the regularization term
    double beta = 1e-4;   // L2 weight (embeddings excluded)
    double margin = 0.3;  // hinge margin M
    bool nsr = true;
    bool sr = true;
    bool nr = true;
    bool ir = true;

    bool any_enabled() const { return nsr || sr || nr || ir; }
};

enum class RegTag : uint8_t { None = 0, NSR = 1, SR = 2, NR = 3, IR = 4 };

const char* to_string(RegTag t);

// Maps token roles to per-position regularizer tags. Disabled regularizers
// and positions lacking every required neighbor yield None. The single
// encoder runs right to left, so its "previous" neighbor at position t is
// original index t+1.
std::vector<RegTag> assign_regularizer(const std::vector<TokenRole>& roles,
                                       const RegularizerConfig& cfg, Variant variant);

// --- per-position losses (tape-level building blocks) ---

// max(0, sym_kl(p_t, p_neighbor) - M)
NodeRef nsr_loss(Tape& tape, NodeRef p_t, NodeRef p_neighbor, double margin);

// Neighbor shifted by the class vector, reprojected onto the floored
// simplex: max(0, sym_kl(p_t, project(p_neighbor + s)) - M). Gradient flows
// into s through the projection.
NodeRef sr_loss(Tape& tape, NodeRef p_t, NodeRef p_neighbor, int shift_param_id, double margin);

struct RegTerm {
    NodeRef loss;
    double divergence = 0.0;  // raw sym_kl of the chosen branch
    int side = -1;            // 0 prev/forward branch, 1 next/backward, -1 single
};

// Transformed-neighbor loss shared by NR and IR: per available neighbor the
// candidate is softmax(T * p_neighbor); the result is the min of the hinged
// divergences, gradient flowing only through the winning branch. Ties choose
// the previous-position branch.
RegTerm transform_loss(Tape& tape, NodeRef p_t, std::optional<NodeRef> p_prev,
                       std::optional<NodeRef> p_next, int t_param_id, double margin);

// Bidirectional form of any regularizer: the forward branch compares the
// forward-direction distribution at t against a candidate built from the
// forward t-1 neighbor, the backward branch uses the backward t+1 neighbor,
// and the loss is the min of the two hinged divergences.
struct BiInputs {
    NodeRef fwd_p_t;
    std::optional<NodeRef> fwd_p_prev;
    NodeRef bwd_p_t;
    std::optional<NodeRef> bwd_p_next;
};
RegTerm bidirectional_reg_loss(Tape& tape, RegTag tag, const BiInputs& in, int param_id,
                               double margin);

// --- full objective ---

struct PositionLoss {
    int position = 0;
    RegTag tag = RegTag::None;
    double divergence = 0.0;
    double hinged = 0.0;
    int side = -1;
};

struct SentenceBreakdown {
    std::vector<PositionLoss> positions;
    double cross_entropy = 0.0;
    double reg_sum = 0.0;  // unweighted sum of hinged terms
};

// Cross entropy of the sentence prediction plus alpha times the applicable
// per-position regularizer losses, recorded on the tape.
NodeRef sentence_objective(Tape& tape, const ModelParams& m, const PreparedSentence& s,
                           const RegularizerConfig& cfg, const DropoutMask* mask,
                           SentenceBreakdown* breakdown = nullptr);

using SentenceLossFn = std::function<NodeRef(Tape&, const ModelParams&, const PreparedSentence&,
                                             const DropoutMask*, SentenceBreakdown*)>;

struct BatchObjective {
    double loss = 0.0;
    Gradients grads;
    std::vector<SentenceBreakdown> breakdowns;
};

// Batch loss: sum of per-sentence objectives (each on a private tape,
// gradients merged in sentence order regardless of thread count) plus
// beta * ||theta||^2 over every non-embedding parameter. `masks` may be
// empty (no dropout) or hold one mask per sentence. A custom per-sentence
// loss replaces the regularized objective but keeps the L2 term.
BatchObjective total_loss(const std::vector<const PreparedSentence*>& batch,
                          const ModelParams& m, const RegularizerConfig& cfg,
                          const std::vector<DropoutMask>& masks, int threads = 1,
                          const SentenceLossFn* custom = nullptr);

}  // namespace lrlstm
