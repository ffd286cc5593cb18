#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "seqrec/embeddings.hpp"
#include "seqrec/tgh.hpp"
#include "seqrec/transition_graph.hpp"

namespace seqrec {

// Full-catalog cosine ranking from the anchor's embedding; the anchor itself
// and the exclusion set are removed before truncation.
RecommendationList sem_nn_rank(const EmbeddingMatrix& emb, ItemIndex anchor, std::size_t K,
                               const std::unordered_set<ItemIndex>& exclude = {});

struct BprHyperparams {
    std::size_t dim = 64;
    double learning_rate = 0.05; // decays linearly to 0 over training
    std::size_t epochs = 30;
    std::size_t negatives = 5;
    std::uint64_t seed = 42;
    bool popularity_negatives = false;
};

// Last-item-to-next-item model with separate anchor and target embedding
// tables, trained with the BPR objective on adjacent pairs of train prefixes.
struct IdLastModel {
    std::size_t dim = 0;
    ItemIndex num_items = 0;
    std::vector<float> anchor_table; // num_items * dim
    std::vector<float> target_table;
    BprHyperparams hp;

    double score(ItemIndex anchor, ItemIndex target) const;

    void save(const std::string& path, const ItemVocab& vocab) const;
    static IdLastModel load(const std::string& path, const ItemVocab& vocab);
};

IdLastModel train_id_last(const SplitDataset& split, const BprHyperparams& hp);

// Single-step BPR gradient for (anchor, pos, neg); exposed for the finite
// difference check.
struct BprGradient {
    std::vector<double> d_anchor, d_pos_target, d_neg_target;
    double loss = 0.0; // -log sigma(x_ij - x_ik)
};
BprGradient bpr_gradient(const IdLastModel& m, ItemIndex anchor, ItemIndex pos, ItemIndex neg);

RecommendationList id_last_rank(const IdLastModel& m, ItemIndex anchor, std::size_t K);

struct FusionSpec {
    double id_weight = 1.0;
    double sem_weight = 1.0;
};

RecommendationList id_plus_sem_rank(const IdLastModel& m, const EmbeddingMatrix& emb,
                                    ItemIndex anchor, std::size_t K,
                                    const FusionSpec& fusion = {});

// Ranks successors of the anchor by raw transition count (ties ascending
// index): the transition-count reading of a last-item recommender.
RecommendationList count_last_rank(const TransitionGraph& g, ItemIndex anchor, std::size_t K);

} // namespace seqrec
