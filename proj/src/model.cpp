#include "lrlstm/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "lrlstm/rng.hpp"

namespace lrlstm {

const char* to_string(Variant v) { return v == Variant::Bilstm ? "bilstm" : "lstm"; }

Variant variant_from_string(const std::string& s) {
    if (s == "lstm") return Variant::Lstm;
    if (s == "bilstm") return Variant::Bilstm;
    throw ConfigError("unknown model variant '" + s + "' (expected lstm or bilstm)");
}

int ModelParams::transform_id(RoleKind kind, const std::string& phrase) const {
    const auto& table = kind == RoleKind::Negator ? neg_t : int_t;
    auto it = table.find(phrase);
    if (it == table.end()) {
        throw ConfigError(std::string("no transformation matrix for ") + phrase);
    }
    return it->second;
}

namespace {

const char* kGateNames[4] = {"i", "f", "o", "g"};

ModelParams build_structure(Dims dims, Variant variant, const std::set<std::string>& negators,
                            const std::set<std::string>& intensifiers,
                            EmbeddingTable embeddings) {
    ModelParams m;
    m.dims = dims;
    m.variant = variant;
    m.embeddings = std::move(embeddings);
    for (int g = 0; g < 4; ++g) {
        m.lstm.W[g] = m.params.add(std::string("lstm.W_") + kGateNames[g], dims.d, dims.d_emb);
    }
    for (int g = 0; g < 4; ++g) {
        m.lstm.U[g] = m.params.add(std::string("lstm.U_") + kGateNames[g], dims.d, dims.d);
    }
    for (int g = 0; g < 4; ++g) {
        m.lstm.b[g] = m.params.add(std::string("lstm.b_") + kGateNames[g], dims.d, 1);
    }
    int h_dim = variant == Variant::Bilstm ? 2 * dims.d : dims.d;
    m.pred.S = m.params.add("pred.S", dims.C, h_dim);
    m.pred.bias = m.params.add("pred.bias", dims.C, 1);
    for (int c = 0; c < 4; ++c) {
        m.shift_ids[c] = m.params.add(std::string("shift.") + to_string(static_cast<SentClass>(c)),
                                      dims.C, 1);
    }
    for (const auto& w : negators) {
        m.neg_t.emplace(w, m.params.add("T_neg[" + w + "]", dims.C, dims.C));
    }
    for (const auto& w : intensifiers) {
        m.int_t.emplace(w, m.params.add("T_int[" + w + "]", dims.C, dims.C));
    }
    return m;
}

}  // namespace

ModelParams init_params(uint64_t seed, Dims dims, Variant variant, const WordLists& lists,
                        EmbeddingTable embeddings) {
    ModelParams m = build_structure(dims, variant, lists.negators, lists.intensifiers,
                                    std::move(embeddings));

    double hi = 1.0 / std::sqrt(static_cast<double>(dims.d));
    auto fill_uniform = [&](int id) {
        Matrix& block = m.params.value(id);
        Rng rng(seed, "init/" + m.params.name(id));
        for (double& v : block.data) v = rng.uniform(0.0, hi);
    };
    for (int g = 0; g < 4; ++g) fill_uniform(m.lstm.W[g]);
    for (int g = 0; g < 4; ++g) fill_uniform(m.lstm.U[g]);
    fill_uniform(m.pred.S);
    // gate and predictor biases stay zero

    // Shifting vector prior: a polarity ramp over the output classes, scaled
    // by 0.1 for weak classes and 0.2 for strong ones. The ramp sums to zero,
    // so the shifted neighbor stays near the simplex.
    int C = dims.C;
    for (int c = 0; c < 4; ++c) {
        auto cls = static_cast<SentClass>(c);
        double delta = (cls == SentClass::StrongNeg || cls == SentClass::StrongPos) ? 0.2 : 0.1;
        double sign = (cls == SentClass::WeakPos || cls == SentClass::StrongPos) ? 1.0 : -1.0;
        Matrix& s = m.params.value(m.shift_ids[c]);
        for (int j = 0; j < C; ++j) {
            double ramp = C == 1 ? 0.0 : (2.0 * j - (C - 1)) / static_cast<double>(C - 1);
            s.data[static_cast<size_t>(j)] = sign * delta * ramp;
        }
    }

    // Negators start near a reversal (anti-diagonal), intensifiers near an
    // identity, both refined by training.
    auto fill_transform = [&](const std::map<std::string, int>& table, bool reverse) {
        for (const auto& [word, id] : table) {
            Matrix& t = m.params.value(id);
            Rng rng(seed, "init/" + m.params.name(id));
            for (int r = 0; r < C; ++r) {
                for (int col = 0; col < C; ++col) {
                    double base = 0.0;
                    if (reverse ? (col == C - 1 - r) : (col == r)) base = 2.0;
                    t.at(r, col) = base + rng.uniform(0.0, 0.01);
                }
            }
        }
    };
    fill_transform(m.neg_t, true);
    fill_transform(m.int_t, false);
    return m;
}

std::pair<NodeRef, NodeRef> lstm_cell(Tape& tape, const LstmWeightIds& w, NodeRef c_prev,
                                      NodeRef h_prev, NodeRef x) {
    auto gate_pre = [&](int g) {
        return tape.add_param(tape.add(tape.matvec(w.W[g], x), tape.matvec(w.U[g], h_prev)),
                              w.b[g]);
    };
    NodeRef i = tape.sigmoid(gate_pre(0));
    NodeRef f = tape.sigmoid(gate_pre(1));
    NodeRef o = tape.sigmoid(gate_pre(2));
    NodeRef g = tape.tanh(gate_pre(3));
    NodeRef c = tape.add(tape.mul(f, c_prev), tape.mul(i, g));
    NodeRef h = tape.mul(o, tape.tanh(c));
    return {c, h};
}

Encoded encode(Tape& tape, const ModelParams& m, const std::vector<int>& token_rows) {
    if (token_rows.empty()) throw DimensionError("encode: empty sentence");
    size_t n = token_rows.size();
    Encoded enc;

    std::vector<NodeRef> inputs(n);
    for (size_t i = 0; i < n; ++i) inputs[i] = tape.embed_row(token_rows[i]);

    auto run = [&](bool backward) {
        std::vector<NodeRef> states(n);
        NodeRef c = tape.zeros(m.dims.d);
        NodeRef h = tape.zeros(m.dims.d);
        for (size_t k = 0; k < n; ++k) {
            size_t pos = backward ? n - 1 - k : k;
            auto [c2, h2] = lstm_cell(tape, m.lstm, c, h, inputs[pos]);
            c = c2;
            h = h2;
            states[pos] = h;
        }
        return states;
    };

    if (m.variant == Variant::Lstm) {
        enc.states = run(true);
        enc.rep = enc.states[0];
    } else {
        enc.fwd = run(false);
        enc.bwd = run(true);
        enc.rep = tape.concat(enc.fwd[n - 1], enc.bwd[0]);
    }
    return enc;
}

NodeRef predict_position(Tape& tape, const PredictorIds& pred, NodeRef h, int col_off,
                         const DropoutMask* mask) {
    NodeRef in = h;
    if (mask) in = tape.dropout(in, mask->keep, mask->inv_keep);
    NodeRef logits = tape.add_param(tape.matvec(pred.S, in, col_off), pred.bias);
    return tape.floor_normalize(tape.softmax(logits));
}

NodeRef predict_direction(Tape& tape, const ModelParams& m, NodeRef h, bool backward_half) {
    int off = backward_half ? m.dims.d : 0;
    return predict_position(tape, m.pred, h, off);
}

ProbDist predict_sentence(Tape& tape, const ModelParams& m, const std::vector<int>& token_rows) {
    Encoded enc = encode(tape, m, token_rows);
    NodeRef p = predict_position(tape, m.pred, enc.rep);
    return ProbDist{tape.value(p)};
}

std::vector<PreparedSentence> prepare_dataset(const Dataset& ds, const ModelParams& m,
                                              const Lexicon& lex, const WordLists& lists) {
    std::vector<PreparedSentence> out;
    out.reserve(ds.size());
    int unk = m.embeddings.lookup("<unk>");
    for (const auto& s : ds.sentences) {
        PreparedSentence p;
        p.label = s.label;
        p.rows.reserve(s.tokens.size());
        for (const auto& t : s.tokens) {
            int row = m.embeddings.lookup(t);
            if (row < 0) row = unk;
            if (row < 0) {
                throw ConfigError("token '" + t + "' missing from the model vocabulary");
            }
            p.rows.push_back(row);
        }
        p.roles = assign_roles(s.tokens, lex, lists);
        out.push_back(std::move(p));
    }
    return out;
}

uint64_t vocab_hash(const std::vector<std::string>& vocab) {
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ull;
    };
    for (const auto& w : vocab) {
        for (unsigned char c : w) mix(c);
        mix('\n');
    }
    return h;
}

namespace {

constexpr char kMagic[8] = {'L', 'R', 'L', 'S', 'T', 'M', '1', '\0'};

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
}

void put_f32(std::vector<uint8_t>& out, double v) {
    float f = static_cast<float>(v);
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(out, bits);
}

class Reader {
public:
    Reader(const std::vector<uint8_t>& bytes, std::string section)
        : bytes_(bytes), section_(std::move(section)) {}

    void set_section(std::string s) { section_ = std::move(s); }

    uint16_t u16() { return static_cast<uint16_t>(byte() | (byte() << 8)); }

    uint32_t u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(byte()) << (8 * i);
        return v;
    }

    uint64_t u64() {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(byte()) << (8 * i);
        return v;
    }

    double f32() {
        uint32_t bits = u32();
        float f;
        std::memcpy(&f, &bits, 4);
        return static_cast<double>(f);
    }

    std::string str(size_t len) {
        if (pos_ + len > bytes_.size()) fail();
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
        pos_ += len;
        return s;
    }

    bool at_end() const { return pos_ == bytes_.size(); }
    size_t pos() const { return pos_; }

private:
    uint8_t byte() {
        if (pos_ >= bytes_.size()) fail();
        return bytes_[pos_++];
    }

    [[noreturn]] void fail() const {
        throw FormatError("checkpoint truncated in section '" + section_ + "'");
    }

    const std::vector<uint8_t>& bytes_;
    std::string section_;
    size_t pos_ = 0;
};

void write_section(std::vector<uint8_t>& out, const std::string& name, const Matrix& m) {
    put_u16(out, static_cast<uint16_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    put_u32(out, static_cast<uint32_t>(m.rows));
    put_u32(out, static_cast<uint32_t>(m.cols));
    put_u64(out, static_cast<uint64_t>(m.size()));
    for (double v : m.data) put_f32(out, v);
}

void read_section(Reader& r, const std::string& expected, Matrix& dst) {
    r.set_section(expected);
    uint16_t name_len = r.u16();
    std::string name = r.str(name_len);
    if (name != expected) {
        throw FormatError("checkpoint section mismatch: expected '" + expected + "', found '" +
                          name + "'");
    }
    uint32_t rows = r.u32();
    uint32_t cols = r.u32();
    uint64_t count = r.u64();
    if (rows != static_cast<uint32_t>(dst.rows) || cols != static_cast<uint32_t>(dst.cols) ||
        count != static_cast<uint64_t>(dst.size())) {
        throw FormatError("checkpoint shape mismatch in section '" + expected + "'");
    }
    for (double& v : dst.data) v = r.f32();
}

}  // namespace

std::vector<uint8_t> serialize_checkpoint(const ModelParams& m) {
    nlohmann::json meta;
    meta["version"] = 1;
    meta["variant"] = to_string(m.variant);
    meta["d"] = m.dims.d;
    meta["d_emb"] = m.dims.d_emb;
    meta["C"] = m.dims.C;
    meta["vocab"] = m.embeddings.vocab;
    char hash_hex[17];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(vocab_hash(m.embeddings.vocab)));
    meta["vocab_hash"] = hash_hex;
    std::vector<std::string> negators, intensifiers;
    for (const auto& [w, id] : m.neg_t) negators.push_back(w);
    for (const auto& [w, id] : m.int_t) intensifiers.push_back(w);
    meta["negators"] = negators;
    meta["intensifiers"] = intensifiers;
    std::string meta_str = meta.dump();

    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 8);
    put_u32(out, static_cast<uint32_t>(meta_str.size()));
    out.insert(out.end(), meta_str.begin(), meta_str.end());

    write_section(out, "embeddings", m.embeddings.vectors);
    for (int id = 0; id < m.params.count(); ++id) {
        write_section(out, m.params.name(id), m.params.value(id));
    }
    return out;
}

void save_checkpoint(const ModelParams& m, const std::string& path) {
    std::vector<uint8_t> bytes = serialize_checkpoint(m);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write on checkpoint: " + path);
}

ModelParams deserialize_checkpoint(const std::vector<uint8_t>& bytes) {
    Reader r(bytes, "header");
    std::string magic = r.str(8);
    if (std::memcmp(magic.data(), kMagic, 8) != 0) {
        throw FormatError("checkpoint: bad magic");
    }
    uint32_t meta_len = r.u32();
    r.set_section("metadata");
    std::string meta_str = r.str(meta_len);
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(meta_str);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("checkpoint: bad metadata: ") + e.what());
    }
    if (meta.value("version", 0) != 1) {
        throw FormatError("checkpoint: unsupported version");
    }

    Dims dims{meta.at("d").get<int>(), meta.at("d_emb").get<int>(), meta.at("C").get<int>()};
    Variant variant = variant_from_string(meta.at("variant").get<std::string>());
    auto vocab = meta.at("vocab").get<std::vector<std::string>>();
    std::set<std::string> negators, intensifiers;
    for (const auto& w : meta.at("negators")) negators.insert(w.get<std::string>());
    for (const auto& w : meta.at("intensifiers")) intensifiers.insert(w.get<std::string>());

    EmbeddingTable table;
    table.vocab = vocab;
    for (size_t i = 0; i < vocab.size(); ++i) table.index.emplace(vocab[i], static_cast<int>(i));
    table.vectors = Matrix(static_cast<int>(vocab.size()), dims.d_emb);

    char hash_hex[17];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(vocab_hash(vocab)));
    if (meta.at("vocab_hash").get<std::string>() != hash_hex) {
        throw FormatError("checkpoint: vocab hash mismatch");
    }

    ModelParams m = build_structure(dims, variant, negators, intensifiers, std::move(table));
    read_section(r, "embeddings", m.embeddings.vectors);
    for (int id = 0; id < m.params.count(); ++id) {
        read_section(r, m.params.name(id), m.params.value(id));
    }
    if (!r.at_end()) {
        throw FormatError("checkpoint: trailing bytes after final section");
    }
    return m;
}

ModelParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return deserialize_checkpoint(bytes);
}

}  // namespace lrlstm
