#include "lrlstm/resources.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "lrlstm/errors.hpp"
#include "lrlstm/rng.hpp"

namespace lrlstm {

const char* to_string(SentClass c) {
    switch (c) {
        case SentClass::StrongNeg: return "strong_neg";
        case SentClass::WeakNeg: return "weak_neg";
        case SentClass::WeakPos: return "weak_pos";
        case SentClass::StrongPos: return "strong_pos";
    }
    return "?";
}

SentClass sent_class_from_string(const std::string& s) {
    if (s == "strong_neg") return SentClass::StrongNeg;
    if (s == "weak_neg") return SentClass::WeakNeg;
    if (s == "weak_pos") return SentClass::WeakPos;
    if (s == "strong_pos") return SentClass::StrongPos;
    throw ParseError("unknown sentiment class '" + s + "'");
}

Lexicon build_lexicon(const ClassPairs& source_a, const ClassPairs& source_b,
                      LexiconBuildStats* stats) {
    std::unordered_map<std::string, SentClass> merged;
    std::set<std::string> conflicted;
    auto absorb = [&](const ClassPairs& src) {
        for (const auto& [word, cls] : src) {
            if (conflicted.count(word)) continue;
            auto it = merged.find(word);
            if (it == merged.end()) {
                merged.emplace(word, cls);
            } else if (it->second != cls) {
                merged.erase(it);
                conflicted.insert(word);
            }
        }
    };
    absorb(source_a);
    absorb(source_b);
    if (stats) {
        stats->kept = merged.size();
        stats->dropped_conflicts = conflicted.size();
    }
    Lexicon lex;
    lex.entries = std::move(merged);
    return lex;
}

ClassPairs load_class_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon file: " + path);
    ClassPairs pairs;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected word<TAB>class");
        }
        std::string word = line.substr(0, tab);
        std::string cls = line.substr(tab + 1);
        while (!cls.empty() && (cls.back() == '\r' || cls.back() == ' ')) cls.pop_back();
        try {
            pairs.emplace_back(word, sent_class_from_string(cls));
        } catch (const ParseError&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": unknown class '" + cls + "'");
        }
    }
    return pairs;
}

Lexicon load_lexicon(const std::string& path) {
    return build_lexicon(load_class_pairs(path), {});
}

void save_lexicon(const Lexicon& lex, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write lexicon file: " + path);
    std::vector<std::pair<std::string, SentClass>> rows(lex.entries.begin(), lex.entries.end());
    std::sort(rows.begin(), rows.end());
    for (const auto& [word, cls] : rows) {
        out << word << '\t' << to_string(cls) << '\n';
    }
}

namespace {

// Appendix word lists, packaged verbatim.
const char* const kDefaultNegators[] = {
    "no",        "not",       "none",      "never",    "neither",  "nobody",
    "nothing",   "nowhere",   "seldom",    "scarcely", "hardly",   "barely",
    "is not",    "cannot",    "may not",   "could not", "would not", "did not",
    "do not",    "does not",  "was not",   "are not",  "were not",
};

const char* const kDefaultIntensifiers[] = {
    "awfully",    "extraordinary", "unusual",      "much",       "rather",
    "very",       "entirely",      "greatly",      "really",     "exceedingly",
    "too",        "completely",    "terribly",     "perfectly",  "quite",
    "certainly",  "especially",    "extremely",    "fairly",     "highly",
    "increasingly", "much more",   "particularly", "probably",   "more",
    "absolutely", "intensely",     "supremely",    "most",       "pretty",
};

}  // namespace

WordLists WordLists::defaults() {
    WordLists w;
    for (const char* s : kDefaultNegators) w.negators.insert(s);
    for (const char* s : kDefaultIntensifiers) w.intensifiers.insert(s);
    return w;
}

std::set<std::string> load_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open word list: " + path);
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        size_t start = line.find_first_not_of(' ');
        if (start == std::string::npos) continue;
        std::string entry = line.substr(start);
        std::transform(entry.begin(), entry.end(), entry.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        out.insert(entry);
    }
    return out;
}

WordLists load_word_lists(const std::string& negators_path, const std::string& intensifiers_path) {
    WordLists w;
    w.negators = load_word_list(negators_path);
    w.intensifiers = load_word_list(intensifiers_path);
    for (const auto& n : w.negators) {
        if (w.intensifiers.count(n)) {
            throw ConfigError("word lists overlap on '" + n + "'");
        }
    }
    return w;
}

TokenRole classify_token(const std::string& word, const Lexicon& lex, const WordLists& lists) {
    if (lists.negators.count(word)) return {RoleKind::Negator, SentClass::StrongNeg, word};
    if (lists.intensifiers.count(word)) return {RoleKind::Intensifier, SentClass::StrongNeg, word};
    auto it = lex.entries.find(word);
    if (it != lex.entries.end()) return {RoleKind::Sentiment, it->second, ""};
    return {};
}

namespace {

struct PhraseIndex {
    // first token -> phrases (token sequences) starting with it, longest first
    std::map<std::string, std::vector<std::vector<std::string>>> by_head;

    void add(const std::set<std::string>& entries) {
        for (const auto& e : entries) {
            std::vector<std::string> parts;
            std::istringstream ss(e);
            std::string tok;
            while (ss >> tok) parts.push_back(tok);
            if (parts.empty()) continue;
            by_head[parts[0]].push_back(std::move(parts));
        }
    }

    void sort_longest_first() {
        for (auto& [head, phrases] : by_head) {
            std::stable_sort(phrases.begin(), phrases.end(),
                             [](const auto& a, const auto& b) { return a.size() > b.size(); });
        }
    }

    // length of the longest phrase matching tokens[i..], 0 if none
    size_t match(const std::vector<std::string>& tokens, size_t i) const {
        auto it = by_head.find(tokens[i]);
        if (it == by_head.end()) return 0;
        for (const auto& phrase : it->second) {
            if (i + phrase.size() > tokens.size()) continue;
            bool ok = true;
            for (size_t k = 1; k < phrase.size(); ++k) {
                if (tokens[i + k] != phrase[k]) {
                    ok = false;
                    break;
                }
            }
            if (ok) return phrase.size();
        }
        return 0;
    }
};

std::string join_phrase(const std::vector<std::string>& tokens, size_t i, size_t len) {
    std::string out = tokens[i];
    for (size_t k = 1; k < len; ++k) {
        out += ' ';
        out += tokens[i + k];
    }
    return out;
}

}  // namespace

std::vector<TokenRole> assign_roles(const std::vector<std::string>& tokens, const Lexicon& lex,
                                    const WordLists& lists) {
    PhraseIndex neg, inten;
    neg.add(lists.negators);
    inten.add(lists.intensifiers);
    neg.sort_longest_first();
    inten.sort_longest_first();

    std::vector<TokenRole> roles(tokens.size());
    size_t i = 0;
    while (i < tokens.size()) {
        size_t nlen = neg.match(tokens, i);
        size_t ilen = inten.match(tokens, i);
        if (nlen > 0 && nlen >= ilen) {
            roles[i + nlen - 1] = {RoleKind::Negator, SentClass::StrongNeg,
                                   join_phrase(tokens, i, nlen)};
            i += nlen;
        } else if (ilen > 0) {
            roles[i + ilen - 1] = {RoleKind::Intensifier, SentClass::StrongNeg,
                                   join_phrase(tokens, i, ilen)};
            i += ilen;
        } else {
            auto it = lex.entries.find(tokens[i]);
            if (it != lex.entries.end()) {
                roles[i] = {RoleKind::Sentiment, it->second, ""};
            }
            ++i;
        }
    }
    return roles;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::string spaced;
    spaced.reserve(line.size() * 2);
    for (unsigned char c : line) {
        if (c < 128 && std::ispunct(c)) {
            spaced += ' ';
            spaced += static_cast<char>(c);
            spaced += ' ';
        } else {
            spaced += static_cast<char>(std::tolower(c));
        }
    }
    std::vector<std::string> tokens;
    std::istringstream ss(spaced);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

EmbeddingTable load_embeddings(const std::string& path, std::vector<std::string> vocab, int d_emb,
                               uint64_t seed) {
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

    EmbeddingTable table;
    table.vocab = std::move(vocab);
    table.index.reserve(table.vocab.size());
    for (size_t i = 0; i < table.vocab.size(); ++i) {
        table.index.emplace(table.vocab[i], static_cast<int>(i));
    }
    table.vectors = Matrix(static_cast<int>(table.vocab.size()), d_emb);

    std::vector<uint8_t> covered(table.vocab.size(), 0);
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open embedding file: " + path);
        std::string line;
        size_t lineno = 0;
        int file_arity = -1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            std::istringstream ss(line);
            std::string word;
            ss >> word;
            std::vector<double> vals;
            vals.reserve(static_cast<size_t>(d_emb));
            double v;
            while (ss >> v) vals.push_back(v);
            if (!ss.eof()) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": non-numeric field");
            }
            if (file_arity < 0) {
                file_arity = static_cast<int>(vals.size());
                if (file_arity != d_emb) {
                    throw DimensionError(path + ": file has " + std::to_string(file_arity) +
                                         "-dimensional vectors, expected " + std::to_string(d_emb));
                }
            } else if (static_cast<int>(vals.size()) != file_arity) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                                 std::to_string(file_arity) + " values, got " +
                                 std::to_string(vals.size()));
            }
            int row = table.lookup(word);
            if (row < 0) continue;  // not in vocabulary
            std::copy(vals.begin(), vals.end(), table.vectors.row(row).begin());
            covered[static_cast<size_t>(row)] = 1;
        }
    }

    size_t hits = 0;
    for (size_t i = 0; i < table.vocab.size(); ++i) {
        if (covered[i]) {
            ++hits;
            continue;
        }
        Rng rng(seed, "embed/" + table.vocab[i]);
        for (int c = 0; c < d_emb; ++c) {
            table.vectors.at(static_cast<int>(i), c) = rng.uniform(-0.01, 0.01);
        }
    }
    table.coverage = table.vocab.empty() ? 1.0 : static_cast<double>(hits) / table.vocab.size();
    return table;
}

}  // namespace lrlstm
