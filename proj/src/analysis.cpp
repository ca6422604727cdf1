#include "lrlstm/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace lrlstm {

namespace {

std::vector<int> rows_for(const ModelParams& m, const std::vector<std::string>& tokens) {
    std::vector<int> rows;
    rows.reserve(tokens.size());
    int unk = m.embeddings.lookup("<unk>");
    for (const auto& t : tokens) {
        int r = m.embeddings.lookup(t);
        if (r < 0) r = unk;
        if (r < 0) throw ConfigError("token '" + t + "' missing from the model vocabulary");
        rows.push_back(r);
    }
    return rows;
}

int predict_label(Tape& tape, const ModelParams& m, const std::vector<int>& rows) {
    tape.clear();
    ProbDist p = predict_sentence(tape, m, rows);
    return argmax_low_tie(p.p);
}

size_t count_correct(const ModelParams& m, const std::vector<const std::vector<int>*>& rows,
                     const std::vector<int>& labels, int threads) {
    if (threads < 1) threads = 1;
    size_t n = rows.size();
    std::vector<uint8_t> correct(n, 0);
    auto run_range = [&](size_t lo, size_t hi) {
        Tape tape(&m.params, &m.embeddings.vectors);
        for (size_t i = lo; i < hi; ++i) {
            correct[i] = predict_label(tape, m, *rows[i]) == labels[i] ? 1 : 0;
        }
    };
    if (threads == 1 || n < 2) {
        run_range(0, n);
    } else {
        size_t chunk = (n + static_cast<size_t>(threads) - 1) / static_cast<size_t>(threads);
        std::vector<std::thread> pool;
        for (size_t lo = 0; lo < n; lo += chunk) {
            pool.emplace_back(run_range, lo, std::min(n, lo + chunk));
        }
        for (auto& t : pool) t.join();
    }
    size_t acc = 0;
    for (uint8_t c : correct) acc += c;
    return acc;
}

}  // namespace

double evaluate_prepared(const ModelParams& m, const std::vector<PreparedSentence>& prepared,
                         int threads) {
    if (prepared.empty()) throw ConfigError("evaluate: empty dataset");
    std::vector<const std::vector<int>*> rows;
    std::vector<int> labels;
    rows.reserve(prepared.size());
    labels.reserve(prepared.size());
    for (const auto& p : prepared) {
        rows.push_back(&p.rows);
        labels.push_back(p.label);
    }
    return static_cast<double>(count_correct(m, rows, labels, threads)) /
           static_cast<double>(prepared.size());
}

double evaluate(const ModelParams& m, const Dataset& ds, int threads) {
    if (ds.scheme.C != m.dims.C) {
        throw ConfigError("evaluate: dataset has " + std::to_string(ds.scheme.C) +
                          " classes but the model expects " + std::to_string(m.dims.C));
    }
    if (ds.sentences.empty()) throw ConfigError("evaluate: empty dataset");
    std::vector<std::vector<int>> all_rows;
    all_rows.reserve(ds.size());
    std::vector<const std::vector<int>*> rows;
    std::vector<int> labels;
    for (const auto& s : ds.sentences) {
        all_rows.push_back(rows_for(m, s.tokens));
        labels.push_back(s.label);
    }
    for (const auto& r : all_rows) rows.push_back(&r);
    return static_cast<double>(count_correct(m, rows, labels, threads)) /
           static_cast<double>(ds.size());
}

ProbDist predict_tokens(const ModelParams& m, const std::vector<std::string>& tokens) {
    Tape tape(&m.params, &m.embeddings.vectors);
    return predict_sentence(tape, m, rows_for(m, tokens));
}

AblationSpec AblationSpec::standard(const RegularizerConfig& base, bool with_plain) {
    AblationSpec spec;
    spec.configs.push_back({"full", base});
    auto drop = [&](const char* id, bool RegularizerConfig::*flag) {
        RegularizerConfig c = base;
        c.*flag = false;
        spec.configs.push_back({id, c});
    };
    drop("-nsr", &RegularizerConfig::nsr);
    drop("-sr", &RegularizerConfig::sr);
    drop("-nr", &RegularizerConfig::nr);
    drop("-ir", &RegularizerConfig::ir);
    if (with_plain) {
        RegularizerConfig c = base;
        c.nsr = c.sr = c.nr = c.ir = false;
        spec.configs.push_back({"plain", c});
    }
    return spec;
}

std::vector<AblationRow> run_ablation(const AblationSpec& spec, const AblationInputs& in,
                                      TrainLog* last_log) {
    if (spec.configs.empty()) throw ConfigError("run_ablation: empty spec");
    std::vector<AblationRow> rows;
    for (const auto& config : spec.configs) {
        ModelParams model = init_params(in.tcfg.seed, in.dims, in.variant, *in.lists,
                                        *in.embeddings);
        auto prepared_train = prepare_dataset(*in.train, model, *in.lexicon, *in.lists);
        auto prepared_valid = prepare_dataset(*in.valid, model, *in.lexicon, *in.lists);
        TrainConfig tcfg = in.tcfg;
        tcfg.reg = config.reg;
        TrainResult res = train(prepared_train, prepared_valid, model, tcfg);
        if (res.log.aborted) {
            throw NumericError("ablation config '" + config.id + "' aborted: " +
                               res.log.abort_reason);
        }
        ModelParams best = deserialize_checkpoint(res.best_checkpoint);
        rows.push_back({config.id, in.test->name, evaluate(best, *in.test, in.tcfg.threads)});
        for (const auto& [name, ds] : in.extra_eval) {
            rows.push_back({config.id, name, evaluate(best, *ds, in.tcfg.threads)});
        }
        if (last_log) *last_log = res.log;
    }
    return rows;
}

std::vector<CurvePoint> negation_curve(const Matrix& transform, int grid_size) {
    if (grid_size < 2) throw ConfigError("negation_curve: grid_size must be >= 2");
    if (transform.rows != transform.cols || transform.rows < 2) {
        throw DimensionError("negation_curve: transform must be square, C >= 2");
    }
    int C = transform.rows;
    std::vector<CurvePoint> points;
    points.reserve(static_cast<size_t>(grid_size));
    for (int k = 0; k < grid_size; ++k) {
        double x = static_cast<double>(k) / (grid_size - 1);
        Vec family(static_cast<size_t>(C), 0.0);
        family[0] = 1.0 - x;
        family[static_cast<size_t>(C - 1)] += x;
        Vec logits(static_cast<size_t>(C), 0.0);
        for (int r = 0; r < C; ++r) {
            double acc = 0.0;
            for (int c = 0; c < C; ++c) acc += transform.at(r, c) * family[static_cast<size_t>(c)];
            logits[static_cast<size_t>(r)] = acc;
        }
        points.push_back({x, softmax(logits).p});
    }
    return points;
}

std::vector<PhrasePair> extract_phrase_pairs(const ModelParams& m, const Dataset& ds,
                                             const std::set<std::string>& modifiers,
                                             int window) {
    WordLists only;
    only.negators = modifiers;  // the matcher cares only about the phrase set
    Lexicon empty_lex;
    std::vector<PhrasePair> pairs;
    Tape tape(&m.params, &m.embeddings.vectors);
    for (size_t si = 0; si < ds.sentences.size(); ++si) {
        const auto& tokens = ds.sentences[si].tokens;
        auto roles = assign_roles(tokens, empty_lex, only);
        for (size_t t = 0; t < roles.size(); ++t) {
            if (roles[t].kind != RoleKind::Negator) continue;
            size_t base_begin = t + 1;
            if (base_begin >= tokens.size()) continue;
            size_t base_end = tokens.size();
            if (window > 0) {
                base_end = std::min(base_end, base_begin + static_cast<size_t>(window));
            }
            size_t phrase_len = 1 + static_cast<size_t>(std::count(
                roles[t].phrase.begin(), roles[t].phrase.end(), ' '));
            size_t phrase_begin = t + 1 - phrase_len;

            std::vector<std::string> base(tokens.begin() + static_cast<long>(base_begin),
                                          tokens.begin() + static_cast<long>(base_end));
            std::vector<std::string> modified(tokens.begin() + static_cast<long>(phrase_begin),
                                              tokens.begin() + static_cast<long>(base_end));

            tape.clear();
            ProbDist pb = predict_sentence(tape, m, rows_for(m, base));
            tape.clear();
            ProbDist pm = predict_sentence(tape, m, rows_for(m, modified));

            PhrasePair pair;
            pair.sentence_id = static_cast<int>(si);
            pair.position = static_cast<int>(t);
            pair.modifier = roles[t].phrase;
            pair.base_label = argmax_low_tie(pb.p);
            pair.modified_label = argmax_low_tie(pm.p);
            if (m.dims.C == 2) {
                pair.base_score = pb[1];
                pair.modified_score = pm[1];
            }
            pairs.push_back(std::move(pair));
        }
    }
    return pairs;
}

int TransitionMatrix::total() const {
    int acc = 0;
    for (int c : counts) acc += c;
    return acc;
}

TransitionMatrix intensity_transitions(const std::vector<PhrasePair>& pairs,
                                       const std::string& word, int C) {
    TransitionMatrix m;
    m.word = word;
    m.C = C;
    m.counts.assign(static_cast<size_t>(C) * C, 0);
    for (const auto& p : pairs) {
        if (p.modifier != word) continue;
        ++m.counts[static_cast<size_t>(p.base_label) * C + p.modified_label];
    }
    return m;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write CSV: " + path);
    return out;
}

}  // namespace

void write_curve_csv(const std::vector<CurvePoint>& points, const std::string& path) {
    auto out = open_csv(path);
    size_t C = points.empty() ? 0 : points[0].mapped.size();
    if (C == 2) {
        out << "x,y\n";
        for (const auto& p : points) out << fmt(p.x) << ',' << fmt(p.mapped[1]) << '\n';
    } else {
        out << "x";
        for (size_t c = 0; c < C; ++c) out << ",p" << c;
        out << "\n";
        for (const auto& p : points) {
            out << fmt(p.x);
            for (double v : p.mapped) out << ',' << fmt(v);
            out << '\n';
        }
    }
}

void write_pairs_csv(const std::vector<PhrasePair>& pairs, int C, const std::string& path) {
    auto out = open_csv(path);
    out << "sentence_id,position,modifier,base,modified\n";
    for (const auto& p : pairs) {
        out << p.sentence_id << ',' << p.position << ',' << p.modifier << ',';
        if (C == 2) {
            out << fmt(p.base_score) << ',' << fmt(p.modified_score) << '\n';
        } else {
            out << p.base_label << ',' << p.modified_label << '\n';
        }
    }
}

void write_matrix_csv(const std::vector<TransitionMatrix>& matrices, const std::string& path) {
    auto out = open_csv(path);
    out << "word,i,j,count\n";
    for (const auto& m : matrices) {
        for (int i = 0; i < m.C; ++i) {
            for (int j = 0; j < m.C; ++j) {
                out << m.word << ',' << i << ',' << j << ',' << m.at(i, j) << '\n';
            }
        }
    }
}

void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& path) {
    auto out = open_csv(path);
    out << "config_id,dataset,accuracy\n";
    for (const auto& r : rows) {
        out << r.config_id << ',' << r.dataset << ',' << fmt(r.accuracy) << '\n';
    }
}

void write_breakdown_csv(const std::vector<SentenceBreakdown>& rows, const std::string& path) {
    auto out = open_csv(path);
    out << "sentence_id,position,tag,divergence,hinged_loss,side\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        for (const auto& p : rows[i].positions) {
            out << i << ',' << p.position << ',' << to_string(p.tag) << ',' << fmt(p.divergence)
                << ',' << fmt(p.hinged) << ',' << (p.side == 0 ? "prev" : "next") << '\n';
        }
    }
}

}  // namespace lrlstm
