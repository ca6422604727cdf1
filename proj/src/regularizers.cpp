#include "lrlstm/regularizers.hpp"

#include <cmath>
#include <thread>

namespace lrlstm {

const char* to_string(RegTag t) {
    switch (t) {
        case RegTag::None: return "none";
        case RegTag::NSR: return "nsr";
        case RegTag::SR: return "sr";
        case RegTag::NR: return "nr";
        case RegTag::IR: return "ir";
    }
    return "?";
}

std::vector<RegTag> assign_regularizer(const std::vector<TokenRole>& roles,
                                       const RegularizerConfig& cfg, Variant variant) {
    size_t n = roles.size();
    std::vector<RegTag> tags(n, RegTag::None);
    for (size_t t = 0; t < n; ++t) {
        RegTag tag = RegTag::None;
        switch (roles[t].kind) {
            case RoleKind::Negator: tag = cfg.nr ? RegTag::NR : RegTag::None; break;
            case RoleKind::Intensifier: tag = cfg.ir ? RegTag::IR : RegTag::None; break;
            case RoleKind::Sentiment: tag = cfg.sr ? RegTag::SR : RegTag::None; break;
            case RoleKind::Plain: tag = cfg.nsr ? RegTag::NSR : RegTag::None; break;
        }
        if (tag == RegTag::None) continue;
        bool has_neighbor;
        if (variant == Variant::Lstm) {
            bool has_prev = t + 1 < n;  // previously processed in the backward pass
            bool has_next = t > 0;
            if (tag == RegTag::NSR || tag == RegTag::SR) {
                has_neighbor = has_prev;
            } else {
                has_neighbor = has_prev || has_next;
            }
        } else {
            has_neighbor = n >= 2;  // at least one directional branch exists
        }
        tags[t] = has_neighbor ? tag : RegTag::None;
    }
    return tags;
}

NodeRef nsr_loss(Tape& tape, NodeRef p_t, NodeRef p_neighbor, double margin) {
    return tape.hinge(tape.sym_kl(p_t, p_neighbor), margin);
}

NodeRef sr_loss(Tape& tape, NodeRef p_t, NodeRef p_neighbor, int shift_param_id, double margin) {
    NodeRef shifted = tape.floor_normalize(tape.add_param(p_neighbor, shift_param_id));
    return tape.hinge(tape.sym_kl(p_t, shifted), margin);
}

namespace {

NodeRef transform_candidate(Tape& tape, int t_param_id, NodeRef p_neighbor) {
    return tape.floor_normalize(tape.softmax(tape.matvec(t_param_id, p_neighbor)));
}

struct Branch {
    NodeRef hinged;
    double divergence;
};

Branch hinged_divergence(Tape& tape, NodeRef p_t, NodeRef candidate, double margin) {
    NodeRef d = tape.sym_kl(p_t, candidate);
    return {tape.hinge(d, margin), tape.scalar(d)};
}

RegTerm pick_min(Tape& tape, std::optional<Branch> prev, std::optional<Branch> next) {
    RegTerm term;
    if (prev && next) {
        int chosen = 0;
        term.loss = tape.min_select(prev->hinged, next->hinged, &chosen);
        term.side = chosen;
        term.divergence = chosen ? next->divergence : prev->divergence;
    } else if (prev) {
        term.loss = prev->hinged;
        term.divergence = prev->divergence;
        term.side = 0;
    } else {
        term.loss = next->hinged;
        term.divergence = next->divergence;
        term.side = 1;
    }
    return term;
}

}  // namespace

RegTerm transform_loss(Tape& tape, NodeRef p_t, std::optional<NodeRef> p_prev,
                       std::optional<NodeRef> p_next, int t_param_id, double margin) {
    if (!p_prev && !p_next) {
        throw DimensionError("transform_loss: both neighbors absent");
    }
    std::optional<Branch> prev, next;
    if (p_prev) {
        prev = hinged_divergence(tape, p_t, transform_candidate(tape, t_param_id, *p_prev), margin);
    }
    if (p_next) {
        next = hinged_divergence(tape, p_t, transform_candidate(tape, t_param_id, *p_next), margin);
    }
    return pick_min(tape, prev, next);
}

RegTerm bidirectional_reg_loss(Tape& tape, RegTag tag, const BiInputs& in, int param_id,
                               double margin) {
    if (!in.fwd_p_prev && !in.bwd_p_next) {
        throw DimensionError("bidirectional_reg_loss: both branches absent");
    }
    auto candidate = [&](NodeRef neighbor) -> NodeRef {
        switch (tag) {
            case RegTag::NSR: return neighbor;
            case RegTag::SR:
                return tape.floor_normalize(tape.add_param(neighbor, param_id));
            case RegTag::NR:
            case RegTag::IR: return transform_candidate(tape, param_id, neighbor);
            case RegTag::None: break;
        }
        throw DimensionError("bidirectional_reg_loss: tag must not be None");
    };
    std::optional<Branch> fwd, bwd;
    if (in.fwd_p_prev) {
        fwd = hinged_divergence(tape, in.fwd_p_t, candidate(*in.fwd_p_prev), margin);
    }
    if (in.bwd_p_next) {
        bwd = hinged_divergence(tape, in.bwd_p_t, candidate(*in.bwd_p_next), margin);
    }
    return pick_min(tape, fwd, bwd);
}

NodeRef sentence_objective(Tape& tape, const ModelParams& m, const PreparedSentence& s,
                           const RegularizerConfig& cfg, const DropoutMask* mask,
                           SentenceBreakdown* breakdown) {
    Encoded enc = encode(tape, m, s.rows);
    NodeRef p_sent = predict_position(tape, m.pred, enc.rep, 0, mask);
    NodeRef ce = tape.neg_log_at(p_sent, s.label);
    if (breakdown) breakdown->cross_entropy = tape.scalar(ce);

    if (!cfg.any_enabled()) return ce;
    std::vector<RegTag> tags = assign_regularizer(s.roles, cfg, m.variant);

    size_t n = s.rows.size();
    // position-wise distributions, built on demand
    std::vector<NodeRef> p_single(n), p_fwd(n), p_bwd(n);
    auto pos_single = [&](size_t t) {
        if (!p_single[t].valid()) p_single[t] = predict_position(tape, m.pred, enc.states[t]);
        return p_single[t];
    };
    auto pos_fwd = [&](size_t t) {
        if (!p_fwd[t].valid()) p_fwd[t] = predict_direction(tape, m, enc.fwd[t], false);
        return p_fwd[t];
    };
    auto pos_bwd = [&](size_t t) {
        if (!p_bwd[t].valid()) p_bwd[t] = predict_direction(tape, m, enc.bwd[t], true);
        return p_bwd[t];
    };

    auto reg_param_id = [&](RegTag tag, size_t t) -> int {
        switch (tag) {
            case RegTag::SR: return m.shift_ids[static_cast<int>(s.roles[t].cls)];
            case RegTag::NR: return m.transform_id(RoleKind::Negator, s.roles[t].phrase);
            case RegTag::IR: return m.transform_id(RoleKind::Intensifier, s.roles[t].phrase);
            default: return -1;
        }
    };

    std::vector<NodeRef> terms;
    for (size_t t = 0; t < n; ++t) {
        RegTag tag = tags[t];
        if (tag == RegTag::None) continue;
        RegTerm term;
        if (m.variant == Variant::Lstm) {
            // backward encoder: previous processed position is t+1
            std::optional<NodeRef> prev, next;
            if (t + 1 < n) prev = pos_single(t + 1);
            if (t > 0) next = pos_single(t - 1);
            switch (tag) {
                case RegTag::NSR: {
                    NodeRef d = tape.sym_kl(pos_single(t), *prev);
                    term.loss = tape.hinge(d, cfg.margin);
                    term.divergence = tape.scalar(d);
                    term.side = 0;
                    break;
                }
                case RegTag::SR: {
                    NodeRef shifted =
                        tape.floor_normalize(tape.add_param(*prev, reg_param_id(tag, t)));
                    NodeRef d = tape.sym_kl(pos_single(t), shifted);
                    term.loss = tape.hinge(d, cfg.margin);
                    term.divergence = tape.scalar(d);
                    term.side = 0;
                    break;
                }
                default:
                    term = transform_loss(tape, pos_single(t), prev, next, reg_param_id(tag, t),
                                          cfg.margin);
            }
        } else {
            BiInputs in;
            in.fwd_p_t = pos_fwd(t);
            in.bwd_p_t = pos_bwd(t);
            if (t > 0) in.fwd_p_prev = pos_fwd(t - 1);
            if (t + 1 < n) in.bwd_p_next = pos_bwd(t + 1);
            int pid = tag == RegTag::NSR ? -1 : reg_param_id(tag, t);
            term = bidirectional_reg_loss(tape, tag, in, pid, cfg.margin);
        }
        terms.push_back(term.loss);
        if (breakdown) {
            breakdown->positions.push_back({static_cast<int>(t), tag, term.divergence,
                                            tape.scalar(term.loss), term.side});
            breakdown->reg_sum += tape.scalar(term.loss);
        }
    }

    if (terms.empty()) return ce;
    NodeRef reg_total = tape.scale(tape.sum(terms), cfg.alpha);
    return tape.add(ce, reg_total);
}

namespace {

double l2_term_and_grads(const ModelParams& m, double beta, Gradients& g) {
    if (beta == 0.0) return 0.0;
    double acc = 0.0;
    for (int id = 0; id < m.params.count(); ++id) {
        const Matrix& v = m.params.value(id);
        Matrix& dg = g.dense[static_cast<size_t>(id)];
        for (size_t k = 0; k < v.data.size(); ++k) {
            acc += v.data[k] * v.data[k];
            dg.data[k] += 2.0 * beta * v.data[k];
        }
    }
    return beta * acc;
}

}  // namespace

BatchObjective total_loss(const std::vector<const PreparedSentence*>& batch,
                          const ModelParams& m, const RegularizerConfig& cfg,
                          const std::vector<DropoutMask>& masks, int threads,
                          const SentenceLossFn* custom) {
    if (batch.empty()) throw DimensionError("total_loss: empty batch");
    if (!masks.empty() && masks.size() != batch.size()) {
        throw DimensionError("total_loss: one dropout mask per sentence required");
    }
    if (threads < 1) threads = 1;

    BatchObjective out;
    out.grads.reset(m.params);
    out.breakdowns.resize(batch.size());
    std::vector<double> losses(batch.size(), 0.0);
    std::vector<Gradients> partials(batch.size());

    auto run_one = [&](size_t i) {
        Tape tape(&m.params, &m.embeddings.vectors);
        const DropoutMask* mask = masks.empty() ? nullptr : &masks[i];
        NodeRef loss = custom ? (*custom)(tape, m, *batch[i], mask, &out.breakdowns[i])
                              : sentence_objective(tape, m, *batch[i], cfg, mask,
                                                   &out.breakdowns[i]);
        losses[i] = tape.scalar(loss);
        partials[i].reset(m.params);
        tape.backward(loss, partials[i]);
    };

    // Waves of `threads` sentences; the merge below runs in sentence order,
    // so results are identical for any thread count.
    for (size_t base = 0; base < batch.size(); base += static_cast<size_t>(threads)) {
        size_t end = std::min(batch.size(), base + static_cast<size_t>(threads));
        if (threads == 1 || end - base == 1) {
            for (size_t i = base; i < end; ++i) run_one(i);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(end - base);
            for (size_t i = base; i < end; ++i) {
                pool.emplace_back([&, i] {
                    try {
                        run_one(i);
                    } catch (...) {
                        errors[i - base] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (auto& e : errors) {
                if (e) std::rethrow_exception(e);
            }
        }
        for (size_t i = base; i < end; ++i) {
            out.loss += losses[i];
            out.grads.accumulate(partials[i]);
            partials[i] = Gradients{};  // release
        }
    }

    out.loss += l2_term_and_grads(m, cfg.beta, out.grads);
    return out;
}

}  // namespace lrlstm
