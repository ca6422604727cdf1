#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "lrlstm/matrix.hpp"

namespace lrlstm {

// Prior sentiment class of a lexicon word. Index order runs from most
// negative to most positive; the numeric value indexes the shifting vectors.
enum class SentClass : uint8_t { StrongNeg = 0, WeakNeg = 1, WeakPos = 2, StrongPos = 3 };

const char* to_string(SentClass c);
SentClass sent_class_from_string(const std::string& s);

// word -> prior sentiment class, conflicts already removed.
struct Lexicon {
    std::unordered_map<std::string, SentClass> entries;

    bool contains(const std::string& w) const { return entries.count(w) != 0; }
    size_t size() const { return entries.size(); }
};

struct LexiconBuildStats {
    size_t kept = 0;
    size_t dropped_conflicts = 0;
};

using ClassPairs = std::vector<std::pair<std::string, SentClass>>;

// Union of two sources; any word whose sources (or duplicate rows within one
// source) disagree is removed entirely. Symmetric in its arguments.
Lexicon build_lexicon(const ClassPairs& source_a, const ClassPairs& source_b,
                      LexiconBuildStats* stats = nullptr);

// Tab-separated `word<TAB>class` rows, class in
// {strong_neg, weak_neg, weak_pos, strong_pos}.
ClassPairs load_class_pairs(const std::string& path);
Lexicon load_lexicon(const std::string& path);
void save_lexicon(const Lexicon& lex, const std::string& path);

// Negator and intensifier sets. Entries are lowercase; multiword entries are
// space-separated ("is not", "much more"). The two sets are disjoint.
struct WordLists {
    std::set<std::string> negators;
    std::set<std::string> intensifiers;

    // The packaged defaults (full negation/intensity word lists).
    static WordLists defaults();
};

WordLists load_word_lists(const std::string& negators_path, const std::string& intensifiers_path);
// One entry per line; blank lines and leading/trailing space ignored.
std::set<std::string> load_word_list(const std::string& path);

enum class RoleKind : uint8_t { Plain = 0, Negator = 1, Intensifier = 2, Sentiment = 3 };

struct TokenRole {
    RoleKind kind = RoleKind::Plain;
    SentClass cls = SentClass::StrongNeg;  // meaningful only for Sentiment
    std::string phrase;                    // matched list entry for Negator/Intensifier
};

// Single-token classification with precedence Negator > Intensifier >
// Sentiment > Plain.
TokenRole classify_token(const std::string& word, const Lexicon& lex, const WordLists& lists);

// Sequence-level role assignment. Multiword list entries are matched
// greedily (longest match first, negators win length ties) over adjacent
// tokens; the final token of a matched phrase carries the role and the
// phrase key, earlier covered tokens stay Plain.
std::vector<TokenRole> assign_roles(const std::vector<std::string>& tokens, const Lexicon& lex,
                                    const WordLists& lists);

// Lowercase, separate punctuation into standalone tokens, split on
// whitespace.
std::vector<std::string> tokenize(const std::string& line);

struct EmbeddingTable {
    std::vector<std::string> vocab;  // index -> word, sorted
    std::unordered_map<std::string, int> index;
    Matrix vectors;  // |V| x d_emb
    double coverage = 1.0;

    int lookup(const std::string& w) const {
        auto it = index.find(w);
        return it == index.end() ? -1 : it->second;
    }
    int dim() const { return vectors.cols; }
};

// Builds the table for `vocab` (deduplicated and sorted here). Words found
// in the embedding file get its vectors; the rest get Uniform(-0.01, 0.01)
// rows drawn from a per-word stream of the run seed, so the result does not
// depend on vocabulary order. An empty path initializes every row from the
// seeded streams with coverage 1.0 over an empty file.
EmbeddingTable load_embeddings(const std::string& path, std::vector<std::string> vocab, int d_emb,
                               uint64_t seed);

}  // namespace lrlstm
