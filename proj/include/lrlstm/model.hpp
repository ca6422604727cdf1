#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrlstm/corpus.hpp"
#include "lrlstm/resources.hpp"
#include "lrlstm/tape.hpp"

namespace lrlstm {

enum class Variant : uint8_t { Lstm = 0, Bilstm = 1 };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct Dims {
    int d = 300;      // hidden size
    int d_emb = 300;  // embedding size
    int C = 2;        // number of sentiment labels
};

// Gate order: input, forget, output, candidate.
struct LstmWeightIds {
    int W[4];  // d x d_emb
    int U[4];  // d x d
    int b[4];  // d
};

struct PredictorIds {
    int S;     // C x h_dim (h_dim = d, or 2d for the bidirectional encoder)
    int bias;  // C
};

struct ModelParams {
    ParamSet params;
    EmbeddingTable embeddings;
    Dims dims;
    Variant variant = Variant::Lstm;

    LstmWeightIds lstm;
    PredictorIds pred;
    int shift_ids[4];                  // s_c per lexicon class, each length C
    std::map<std::string, int> neg_t;  // negator phrase -> C x C matrix id
    std::map<std::string, int> int_t;  // intensifier phrase -> C x C matrix id

    int h_dim() const { return variant == Variant::Bilstm ? 2 * dims.d : dims.d; }
    int transform_id(RoleKind kind, const std::string& phrase) const;
};

// Fresh model. Hidden-layer weights draw Uniform(0, 1/sqrt(d)); biases start
// at zero. Shifting vectors start at a small polarity ramp (strong classes
// doubled); negator matrices start near 2x anti-diagonal and intensifier
// matrices near 2x identity, both plus Uniform(0, 0.01) noise.
ModelParams init_params(uint64_t seed, Dims dims, Variant variant, const WordLists& lists,
                        EmbeddingTable embeddings);

// One LSTM step; everything is recorded on the tape.
std::pair<NodeRef, NodeRef> lstm_cell(Tape& tape, const LstmWeightIds& w, NodeRef c_prev,
                                      NodeRef h_prev, NodeRef x);

struct Encoded {
    // Single direction: states[i] is the hidden state at position i, encoding
    // tokens i..n-1 (the encoder runs right to left).
    std::vector<NodeRef> states;
    // Bidirectional: per-direction state sequences (shared weights).
    std::vector<NodeRef> fwd;
    std::vector<NodeRef> bwd;
    NodeRef rep;  // sentence representation: states[0], or [fwd[n-1], bwd[0]]
};

Encoded encode(Tape& tape, const ModelParams& m, const std::vector<int>& token_rows);

struct DropoutMask {
    std::vector<uint8_t> keep;
    double inv_keep = 1.0;

    static DropoutMask all_keep(int dim) { return {std::vector<uint8_t>(static_cast<size_t>(dim), 1), 1.0}; }
};

// softmax(S[:, col_off:col_off+dim(h)] * h + bias) pushed onto the floored
// simplex. The predictor is shared: the same S and bias produce every
// position-wise distribution and the final sentence prediction.
NodeRef predict_position(Tape& tape, const PredictorIds& pred, NodeRef h, int col_off = 0,
                         const DropoutMask* mask = nullptr);

// Per-direction position-wise distributions for the bidirectional encoder:
// the forward sequence uses the left half of S, the backward sequence the
// right half, with the shared bias.
NodeRef predict_direction(Tape& tape, const ModelParams& m, NodeRef h, bool backward_half);

// Forward-only sentence prediction (no dropout), e.g. for evaluation.
ProbDist predict_sentence(Tape& tape, const ModelParams& m, const std::vector<int>& token_rows);

// Dataset resolved against a model: embedding rows and token roles.
struct PreparedSentence {
    std::vector<int> rows;
    std::vector<TokenRole> roles;
    int label = 0;
};

std::vector<PreparedSentence> prepare_dataset(const Dataset& ds, const ModelParams& m,
                                              const Lexicon& lex, const WordLists& lists);

// Checkpoint file: magic "LRLSTM1\0", a length-prefixed UTF-8 JSON metadata
// block (dims, variant, vocab, word lists, vocab hash), then named sections
// of little-endian IEEE-754 32-bit floats with shape and length guards.
void save_checkpoint(const ModelParams& m, const std::string& path);
std::vector<uint8_t> serialize_checkpoint(const ModelParams& m);
ModelParams load_checkpoint(const std::string& path);
ModelParams deserialize_checkpoint(const std::vector<uint8_t>& bytes);

uint64_t vocab_hash(const std::vector<std::string>& vocab);

}  // namespace lrlstm
