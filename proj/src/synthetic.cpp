#include "lrlstm/synthetic.hpp"

#include <algorithm>

#include "lrlstm/gradcheck.hpp"
#include "lrlstm/regularizers.hpp"
#include "lrlstm/rng.hpp"

namespace lrlstm {

namespace {

std::vector<std::string> numbered(const std::string& stem, int n) {
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
    return v[static_cast<size_t>(rng.next_below(v.size()))];
}

}  // namespace

SyntheticBundle make_separable_corpus(int n_sentences, uint64_t seed) {
    SyntheticBundle b;
    auto pos_words = numbered("good", 5);
    auto neg_words = numbered("bad", 5);
    auto fillers = numbered("thing", 10);
    for (const auto& w : pos_words) b.lexicon.entries.emplace(w, SentClass::WeakPos);
    for (const auto& w : neg_words) b.lexicon.entries.emplace(w, SentClass::WeakNeg);

    b.data.scheme = LabelScheme::binary();
    b.data.name = "separable";
    Rng rng(seed, "separable-corpus");
    for (int i = 0; i < n_sentences; ++i) {
        bool positive = rng.next_below(2) == 1;
        std::vector<std::string> tokens;
        size_t len = 3 + rng.next_below(3);
        size_t key_at = rng.next_below(len);
        for (size_t t = 0; t < len; ++t) {
            if (t == key_at) {
                tokens.push_back(positive ? pick(rng, pos_words) : pick(rng, neg_words));
            } else {
                tokens.push_back(pick(rng, fillers));
            }
        }
        b.data.sentences.push_back({std::move(tokens), positive ? 1 : 0});
    }
    return b;
}

SyntheticBundle make_linguistic_corpus(int n_sentences, uint64_t seed) {
    SyntheticBundle b;
    b.lists.negators = {"not", "never", "hardly", "nobody"};
    b.lists.intensifiers = {"very", "really", "extremely", "most"};

    // Many sentiment words, each rare, so the lexicon prior matters.
    auto weak_pos = numbered("nice", 30);
    auto strong_pos = numbered("great", 30);
    auto weak_neg = numbered("poor", 30);
    auto strong_neg = numbered("awful", 30);
    auto fillers = numbered("film", 24);
    for (const auto& w : weak_pos) b.lexicon.entries.emplace(w, SentClass::WeakPos);
    for (const auto& w : strong_pos) b.lexicon.entries.emplace(w, SentClass::StrongPos);
    for (const auto& w : weak_neg) b.lexicon.entries.emplace(w, SentClass::WeakNeg);
    for (const auto& w : strong_neg) b.lexicon.entries.emplace(w, SentClass::StrongNeg);

    std::vector<std::string> negators(b.lists.negators.begin(), b.lists.negators.end());
    std::vector<std::string> intensifiers(b.lists.intensifiers.begin(),
                                          b.lists.intensifiers.end());

    auto label_of = [](SentClass cls) {
        switch (cls) {
            case SentClass::StrongNeg: return 0;
            case SentClass::WeakNeg: return 1;
            case SentClass::WeakPos: return 3;
            case SentClass::StrongPos: return 4;
        }
        return 2;
    };

    b.data.scheme = LabelScheme::fine5();
    b.data.name = "linguistic";
    Rng rng(seed, "linguistic-corpus");
    for (int i = 0; i < n_sentences; ++i) {
        std::vector<std::string> tokens;
        size_t lead = rng.next_below(3);
        size_t tail = 1 + rng.next_below(3);
        for (size_t t = 0; t < lead; ++t) tokens.push_back(pick(rng, fillers));

        int label;
        uint64_t kind = rng.next_below(10);
        if (kind == 0) {
            // all-filler sentence stays neutral
            tokens.push_back(pick(rng, fillers));
            label = 2;
        } else {
            SentClass cls = static_cast<SentClass>(rng.next_below(4));
            const auto& pool = cls == SentClass::StrongNeg  ? strong_neg
                               : cls == SentClass::WeakNeg  ? weak_neg
                               : cls == SentClass::WeakPos  ? weak_pos
                                                            : strong_pos;
            label = label_of(cls);
            if (kind <= 3) {
                // negator flips the class across neutral
                tokens.push_back(pick(rng, negators));
                label = 4 - label;
            } else if (kind <= 6) {
                // intensifier pushes the class outward
                tokens.push_back(pick(rng, intensifiers));
                label = label <= 1 ? 0 : 4;
            }
            tokens.push_back(pick(rng, pool));
        }
        for (size_t t = 0; t < tail; ++t) tokens.push_back(pick(rng, fillers));
        b.data.sentences.push_back({std::move(tokens), label});
    }
    return b;
}

BuiltinGradCheck builtin_gradcheck(uint64_t seed, Variant variant, int num_classes, double h) {
    // Hand-built sentences covering all four regularizer tags, short enough
    // for fast finite-difference probing.
    SyntheticBundle b;
    b.lists.negators = {"not", "is not"};
    b.lists.intensifiers = {"very", "much more"};
    b.lexicon.entries = {{"good", SentClass::WeakPos},
                         {"great", SentClass::StrongPos},
                         {"bad", SentClass::WeakNeg},
                         {"awful", SentClass::StrongNeg}};

    Dims dims{8, 6, num_classes};
    Rng label_rng(seed, "gradcheck-labels");
    std::vector<std::vector<std::string>> sentences = {
        {"it", "is", "not", "very", "good"},
        {"much", "more", "bad", "stuff"},
        {"awful", "thing"},
        {"it", "is", "great"},
    };
    std::vector<std::string> vocab = {"<unk>"};
    for (const auto& s : sentences) vocab.insert(vocab.end(), s.begin(), s.end());
    EmbeddingTable table = load_embeddings("", vocab, dims.d_emb, seed);

    ModelParams model = init_params(seed, dims, variant, b.lists, std::move(table));

    Dataset ds;
    ds.scheme = num_classes == 5 ? LabelScheme::fine5() : LabelScheme::binary();
    for (auto& tokens : sentences) {
        ds.sentences.push_back(
            {tokens, static_cast<int>(label_rng.next_below(static_cast<uint64_t>(num_classes)))});
    }
    auto prepared = prepare_dataset(ds, model, b.lexicon, b.lists);
    std::vector<const PreparedSentence*> batch;
    for (const auto& p : prepared) batch.push_back(&p);

    RegularizerConfig reg;
    reg.alpha = 0.5;
    reg.beta = 1e-4;
    // keep the hinges active so gradients actually flow
    reg.margin = 0.001;

    auto loss_value = [&]() {
        return total_loss(batch, model, reg, {}, 1).loss;
    };
    BatchObjective obj = total_loss(batch, model, reg, {}, 1);

    std::vector<int> embed_rows;
    for (const auto& p : prepared) {
        embed_rows.insert(embed_rows.end(), p.rows.begin(), p.rows.end());
    }
    std::sort(embed_rows.begin(), embed_rows.end());
    embed_rows.erase(std::unique(embed_rows.begin(), embed_rows.end()), embed_rows.end());

    GradCheckReport rep = grad_check(model.params, &model.embeddings.vectors, embed_rows,
                                     loss_value, obj.grads, h);
    return {rep.max_rel_err, rep.entries_checked, rep.worst_block};
}

}  // namespace lrlstm
