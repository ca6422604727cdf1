#pragma once

#include <cstdint>

#include "lrlstm/corpus.hpp"
#include "lrlstm/model.hpp"

namespace lrlstm {

struct SyntheticBundle {
    Dataset data;
    Lexicon lexicon;
    WordLists lists;
};

// Tiny 2-class corpus where a bag-of-lexicon rule is perfectly predictive;
// used by the overfit check.
SyntheticBundle make_separable_corpus(int n_sentences, uint64_t seed);

// Templated 5-class corpus: gold labels derive from the sentiment word's
// lexicon polarity, flipped by negators and strengthened by intensifiers,
// with filler words padding each sentence.
SyntheticBundle make_linguistic_corpus(int n_sentences, uint64_t seed);

struct BuiltinGradCheck {
    double max_rel_err = 0.0;
    size_t entries_checked = 0;
    std::string worst_block;
};

// Gradient check of the full training objective (classification plus every
// regularizer, L2 included, clipping and dropout off) on a small random
// instance: hidden size 8, sentences of length <= 6 covering all four
// regularizer tags.
BuiltinGradCheck builtin_gradcheck(uint64_t seed, Variant variant, int num_classes, double h);

}  // namespace lrlstm
