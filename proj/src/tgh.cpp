#include "seqrec/tgh.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace seqrec {

TghConfig TghConfig::tgh1() {
    TghConfig cfg;
    cfg.anchors = {{0, {7, 2, 1}}};
    cfg.alpha = 0.5;
    return cfg;
}

TghConfig TghConfig::tgh2() {
    TghConfig cfg;
    cfg.anchors = {{0, {5, 1}}, {1, {3, 1}}};
    cfg.alpha = 0.5;
    return cfg;
}

TghConfig TghConfig::preset(const std::string& name) {
    if (name == "tgh1") return tgh1();
    if (name == "tgh2") return tgh2();
    throw ConfigError("unknown TGH preset '" + name + "' (expected tgh1 or tgh2)");
}

double score_candidate(const EmbeddingMatrix& emb, const TransitionGraph& g, ItemIndex anchor,
                       ItemIndex cand, int hop, double alpha) {
    double s = cosine(emb, anchor, cand);
    if (hop == 1) s += alpha * g.edge_weight(anchor, cand);
    return s;
}

std::vector<ScoredCandidate> retrieve_for_anchor(const TransitionGraph& g,
                                                 const EmbeddingMatrix& emb, ItemIndex anchor,
                                                 std::span<const std::size_t> budgets,
                                                 double alpha, bool exclude_anchor) {
    std::vector<ScoredCandidate> kept;
    if (budgets.empty()) return kept;
    auto nbh = k_hop_neighborhood(g, anchor, static_cast<int>(budgets.size()));
    if (!nbh.anchor_in_graph) return kept;

    // Bucket the neighborhood by minimum hop distance.
    std::vector<std::vector<ScoredCandidate>> by_hop(budgets.size());
    for (const auto& [item, hop] : nbh.entries) {
        if (exclude_anchor && item == anchor) continue;
        ScoredCandidate c;
        c.item = item;
        c.hop = hop;
        c.score = score_candidate(emb, g, anchor, item, hop, alpha);
        by_hop[hop - 1].push_back(c);
    }
    auto better = [](const ScoredCandidate& a, const ScoredCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.item < b.item;
    };
    for (std::size_t h = 0; h < budgets.size(); ++h) {
        auto& bucket = by_hop[h];
        std::size_t budget = budgets[h];
        if (bucket.size() > budget) {
            std::partial_sort(bucket.begin(), bucket.begin() + static_cast<std::ptrdiff_t>(budget),
                              bucket.end(), better);
            bucket.resize(budget);
        } else {
            std::sort(bucket.begin(), bucket.end(), better);
        }
        kept.insert(kept.end(), bucket.begin(), bucket.end());
    }
    return kept;
}

RecommendationList tgh_recommend(const TghConfig& cfg, const TransitionGraph& g,
                                 const EmbeddingMatrix& emb,
                                 std::span<const ItemIndex> context) {
    std::unordered_map<ItemIndex, double> best;
    std::unordered_set<ItemIndex> history;
    if (cfg.exclude_history) history.insert(context.begin(), context.end());

    for (const auto& anchor_spec : cfg.anchors) {
        if (static_cast<std::size_t>(anchor_spec.offset) >= context.size()) continue;
        ItemIndex anchor = context[context.size() - 1 - anchor_spec.offset];
        auto cands = retrieve_for_anchor(g, emb, anchor, anchor_spec.hop_budgets, cfg.alpha,
                                         cfg.exclude_anchor);
        for (auto& c : cands) {
            if (cfg.exclude_history && history.contains(c.item)) continue;
            auto [it, inserted] = best.emplace(c.item, c.score);
            if (!inserted && c.score > it->second) it->second = c.score;
        }
    }

    RecommendationList out;
    out.reserve(best.size());
    for (const auto& [item, score] : best) out.push_back({item, score});
    std::sort(out.begin(), out.end(), [](const ScoredItem& a, const ScoredItem& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.item < b.item;
    });
    if (out.size() > cfg.list_size) out.resize(cfg.list_size);
    return out;
}

} // namespace seqrec
