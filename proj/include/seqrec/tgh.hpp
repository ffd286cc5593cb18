#pragma once

#include <span>
#include <string>
#include <vector>

#include "seqrec/embeddings.hpp"
#include "seqrec/transition_graph.hpp"
#include "seqrec/types.hpp"

namespace seqrec {

struct AnchorSpec {
    int offset = 0; // 0 = last item of the context, 1 = second-last
    std::vector<std::size_t> hop_budgets; // index 0 = hop 1; length <= 3
};

struct TghConfig {
    std::vector<AnchorSpec> anchors;
    double alpha = 0.5;
    bool exclude_anchor = true;
    bool exclude_history = false;
    std::size_t list_size = 10;

    static TghConfig tgh1(); // one anchor (offset 0, budgets [7,2,1])
    static TghConfig tgh2(); // anchors (0, [5,1]) and (1, [3,1])
    static TghConfig preset(const std::string& name); // "tgh1" | "tgh2"
};

struct ScoredCandidate {
    ItemIndex item = kInvalidItem;
    double score = 0.0;
    int source_anchor = 0; // anchor offset that produced it
    int hop = 0;
};

struct ScoredItem {
    ItemIndex item = kInvalidItem;
    double score = 0.0;
};

using RecommendationList = std::vector<ScoredItem>;

// cosine(anchor, cand) + alpha * [hop == 1] * w(anchor, cand)
double score_candidate(const EmbeddingMatrix& emb, const TransitionGraph& g, ItemIndex anchor,
                       ItemIndex cand, int hop, double alpha);

// Per hop, keeps the top budgets[hop-1] members of the anchor's neighborhood
// by (score desc, item asc). Hop is the candidate's minimum distance.
std::vector<ScoredCandidate> retrieve_for_anchor(const TransitionGraph& g,
                                                 const EmbeddingMatrix& emb, ItemIndex anchor,
                                                 std::span<const std::size_t> budgets,
                                                 double alpha, bool exclude_anchor);

// Union over anchors with max-score dedup, sorted (score desc, item asc),
// truncated to cfg.list_size. Anchors whose offset exceeds the context are
// skipped.
RecommendationList tgh_recommend(const TghConfig& cfg, const TransitionGraph& g,
                                 const EmbeddingMatrix& emb,
                                 std::span<const ItemIndex> context);

} // namespace seqrec
