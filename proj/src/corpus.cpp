#include "lrlstm/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lrlstm/errors.hpp"
#include "lrlstm/rng.hpp"

namespace lrlstm {

namespace {

void push_sentence(Dataset& ds, std::vector<std::string> tokens, int label) {
    if (tokens.empty()) {
        ++ds.skipped_empty;
        return;
    }
    if (tokens.size() > kMaxSentenceTokens) {
        tokens.resize(kMaxSentenceTokens);
        ++ds.truncated;
    }
    ds.sentences.push_back({std::move(tokens), label});
}

void load_mr_file(Dataset& ds, const std::string& path, int label) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open MR file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        push_sentence(ds, tokenize(line), label);
    }
}

}  // namespace

Dataset load_mr(const std::string& pos_path, const std::string& neg_path) {
    Dataset ds;
    ds.scheme = LabelScheme::binary();
    ds.name = "mr";
    load_mr_file(ds, pos_path, 1);
    load_mr_file(ds, neg_path, 0);
    return ds;
}

namespace {

class SstParser {
public:
    explicit SstParser(std::string_view line) : s_(line) {}

    SstParse run() {
        SstParse out;
        skip_space();
        out.label = parse_node(out);
        skip_space();
        if (pos_ != s_.size()) fail("trailing characters after tree");
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("SST tree at byte " + std::to_string(pos_) + ": " + msg);
    }

    void skip_space() {
        while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
    }

    // returns the node label
    int parse_node(SstParse& out) {
        if (pos_ >= s_.size() || s_[pos_] != '(') fail("expected '('");
        ++pos_;
        skip_space();
        size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
        if (pos_ == start) fail("expected integer label");
        int label = 0;
        for (size_t i = start; i < pos_; ++i) label = label * 10 + (s_[i] - '0');
        if (label > 4) fail("label out of range 0..4");
        skip_space();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (s_[pos_] == '(') {
            while (pos_ < s_.size() && s_[pos_] == '(') {
                parse_node(out);
                skip_space();
            }
        } else {
            size_t tstart = pos_;
            while (pos_ < s_.size() && s_[pos_] != ')' && s_[pos_] != '(' && s_[pos_] != ' ') {
                ++pos_;
            }
            if (pos_ == tstart) fail("expected leaf token");
            std::string token(s_.substr(tstart, pos_ - tstart));
            out.tokens.push_back(token);
            if (label != 2) {
                std::string lower = token;
                std::transform(lower.begin(), lower.end(), lower.begin(),
                               [](unsigned char c) { return std::tolower(c); });
                out.polar_leaves.emplace_back(std::move(lower), label);
            }
            skip_space();
        }
        if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
        ++pos_;
        return label;
    }

    std::string_view s_;
    size_t pos_ = 0;
};

}  // namespace

SstParse parse_sst_tree(std::string_view line) { return SstParser(line).run(); }

Dataset load_sst(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open SST file: " + path);
    Dataset ds;
    ds.scheme = LabelScheme::fine5();
    ds.name = "sst";
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            ++ds.skipped_empty;
            continue;
        }
        SstParse parsed;
        try {
            parsed = parse_sst_tree(line);
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        for (auto& t : parsed.tokens) {
            std::transform(t.begin(), t.end(), t.begin(),
                           [](unsigned char c) { return std::tolower(c); });
        }
        push_sentence(ds, std::move(parsed.tokens), parsed.label);
    }
    return ds;
}

std::vector<std::pair<std::string, int>> collect_sst_polar_leaves(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open SST file: " + path);
    std::vector<std::pair<std::string, int>> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            SstParse parsed = parse_sst_tree(line);
            out.insert(out.end(), parsed.polar_leaves.begin(), parsed.polar_leaves.end());
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

Dataset load_tsv(const std::string& path, LabelScheme scheme) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);
    Dataset ds;
    ds.scheme = std::move(scheme);
    ds.name = "tsv";
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            ++ds.skipped_empty;
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected label<TAB>tokens");
        }
        int label;
        try {
            label = std::stoi(line.substr(0, tab));
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad label");
        }
        if (label < 0 || label >= ds.scheme.C) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": label out of range");
        }
        std::vector<std::string> tokens;
        std::istringstream ss(line.substr(tab + 1));
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);
        push_sentence(ds, std::move(tokens), label);
    }
    return ds;
}

void save_tsv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset file: " + path);
    for (const auto& s : ds.sentences) {
        out << s.label << '\t';
        for (size_t i = 0; i < s.tokens.size(); ++i) {
            if (i) out << ' ';
            out << s.tokens[i];
        }
        out << '\n';
    }
}

std::array<Dataset, 3> split_dataset(const Dataset& ds, std::array<double, 3> ratios,
                                     uint64_t seed) {
    double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("split ratios must sum to 1");
    }
    for (double r : ratios) {
        if (r <= 0.0) throw ConfigError("split ratios must be positive");
    }
    std::vector<size_t> order(ds.size());
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(seed, "split");
    rng.shuffle(order);

    size_t n = ds.size();
    size_t n_train = static_cast<size_t>(std::llround(ratios[0] * static_cast<double>(n)));
    size_t n_valid = static_cast<size_t>(std::llround(ratios[1] * static_cast<double>(n)));
    n_train = std::min(n_train, n);
    n_valid = std::min(n_valid, n - n_train);

    std::array<Dataset, 3> parts;
    const char* suffix[3] = {".train", ".valid", ".test"};
    size_t bounds[4] = {0, n_train, n_train + n_valid, n};
    for (int p = 0; p < 3; ++p) {
        parts[p].scheme = ds.scheme;
        parts[p].name = ds.name + suffix[p];
        for (size_t i = bounds[p]; i < bounds[p + 1]; ++i) {
            parts[p].sentences.push_back(ds.sentences[order[i]]);
        }
    }
    return parts;
}

namespace {

bool contains_role(const Sentence& s, RoleKind kind, const WordLists& lists, const Lexicon& lex) {
    auto roles = assign_roles(s.tokens, lex, lists);
    for (const auto& r : roles) {
        if (r.kind == kind) return true;
    }
    return false;
}

}  // namespace

Dataset extract_subset(const Dataset& ds, RoleFilter filter, const WordLists& lists,
                       const Lexicon& lex) {
    RoleKind kind = filter == RoleFilter::ContainsNegator      ? RoleKind::Negator
                    : filter == RoleFilter::ContainsIntensifier ? RoleKind::Intensifier
                                                                : RoleKind::Sentiment;
    Dataset out;
    out.scheme = ds.scheme;
    out.name = ds.name + ".subset";
    for (const auto& s : ds.sentences) {
        if (contains_role(s, kind, lists, lex)) out.sentences.push_back(s);
    }
    return out;
}

CorpusStats corpus_stats(const Dataset& ds, const WordLists& lists, const Lexicon& lex) {
    CorpusStats st;
    st.total = ds.size();
    for (const auto& s : ds.sentences) {
        bool sent = false, neg = false, inten = false;
        for (const auto& r : assign_roles(s.tokens, lex, lists)) {
            sent |= r.kind == RoleKind::Sentiment;
            neg |= r.kind == RoleKind::Negator;
            inten |= r.kind == RoleKind::Intensifier;
        }
        st.with_sentiment += sent;
        st.with_negation += neg;
        st.with_intensity += inten;
    }
    return st;
}

}  // namespace lrlstm
