#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lrlstm/resources.hpp"

namespace lrlstm {

// Sentences longer than this are truncated at load time.
inline constexpr size_t kMaxSentenceTokens = 60;

struct LabelScheme {
    int C = 2;
    std::vector<std::string> names;  // index order: most negative -> most positive

    static LabelScheme binary() { return {2, {"negative", "positive"}}; }
    static LabelScheme fine5() {
        return {5, {"very_negative", "negative", "neutral", "positive", "very_positive"}};
    }
};

struct Sentence {
    std::vector<std::string> tokens;
    int label = 0;
};

struct Dataset {
    std::vector<Sentence> sentences;
    LabelScheme scheme;
    std::string name;
    size_t skipped_empty = 0;
    size_t truncated = 0;

    size_t size() const { return sentences.size(); }
};

// Two one-sentence-per-line files; positive lines get label 1, negative 0,
// order preserved (pos then neg). Empty lines are skipped and counted.
Dataset load_mr(const std::string& pos_path, const std::string& neg_path);

struct SstParse {
    std::vector<std::string> tokens;  // leaves, left to right, as written
    int label = 0;                    // root label 0..4
    std::vector<std::pair<std::string, int>> polar_leaves;  // leaf (word, label != 2)
};

// Parses one parenthesized tree `(label child child ...)` with integer node
// labels 0..4 and `(label token)` leaves. Errors carry the byte offset.
SstParse parse_sst_tree(std::string_view line);

// One tree per line; tokens are lowercased after parsing.
Dataset load_sst(const std::string& path);

// Collects lowercased non-neutral leaf (word, raw label) pairs for lexicon
// construction.
std::vector<std::pair<std::string, int>> collect_sst_polar_leaves(const std::string& path);

// Generic labeled text: `label<TAB>token token ...` per line.
Dataset load_tsv(const std::string& path, LabelScheme scheme);
void save_tsv(const Dataset& ds, const std::string& path);

// Seeded shuffle then contiguous cut; exact partition of the input.
std::array<Dataset, 3> split_dataset(const Dataset& ds, std::array<double, 3> ratios,
                                     uint64_t seed);

enum class RoleFilter { ContainsNegator, ContainsIntensifier, ContainsSentiment };

Dataset extract_subset(const Dataset& ds, RoleFilter filter, const WordLists& lists,
                       const Lexicon& lex);

struct CorpusStats {
    size_t total = 0;
    size_t with_sentiment = 0;
    size_t with_negation = 0;
    size_t with_intensity = 0;
};

CorpusStats corpus_stats(const Dataset& ds, const WordLists& lists, const Lexicon& lex);

}  // namespace lrlstm
