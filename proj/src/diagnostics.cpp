#include "seqrec/diagnostics.hpp"

#include <algorithm>

namespace seqrec {

std::set<std::string> correct_set(const PredictionSet& p, const SplitDataset& split,
                                  std::size_t K) {
    std::set<std::string> out;
    for (std::size_t u = 0; u < split.users.size(); ++u) {
        const auto& list = p.lists[u];
        std::size_t limit = std::min(K, list.size());
        for (std::size_t r = 0; r < limit; ++r) {
            if (list[r] == split.users[u].test_target) {
                out.insert(split.users[u].user_id);
                break;
            }
        }
    }
    return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& x : a)
        if (b.contains(x)) ++inter;
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

OverlapMatrix prediction_overlap(const std::vector<PredictionSet>& preds,
                                 const SplitDataset& split, std::size_t K) {
    OverlapMatrix m;
    std::vector<std::set<std::string>> sets;
    sets.reserve(preds.size());
    for (const auto& p : preds) {
        m.models.push_back(p.model_name);
        sets.push_back(correct_set(p, split, K));
    }
    m.values.assign(preds.size(), std::vector<double>(preds.size(), 0.0));
    for (std::size_t i = 0; i < preds.size(); ++i)
        for (std::size_t j = i; j < preds.size(); ++j) {
            double v = jaccard(sets[i], sets[j]);
            m.values[i][j] = v;
            m.values[j][i] = v;
        }
    return m;
}

HopBucketReport recall_by_hop(const TransitionGraph& g, const std::vector<PredictionSet>& preds,
                              const SplitDataset& split, std::size_t K, int max_hop) {
    HopBucketReport rep;
    for (int h = 1; h <= max_hop; ++h) rep.labels.push_back(std::to_string(h));
    rep.labels.push_back(">" + std::to_string(max_hop) + " or unreachable");
    const std::size_t num_buckets = rep.labels.size();
    rep.user_counts.assign(num_buckets, 0);

    std::vector<std::size_t> bucket_of(split.users.size());
    for (std::size_t u = 0; u < split.users.size(); ++u) {
        auto d = hop_distance(g, split.users[u].last_context_item(),
                              split.users[u].test_target, max_hop);
        std::size_t b = d ? static_cast<std::size_t>(*d - 1) : num_buckets - 1;
        bucket_of[u] = b;
        ++rep.user_counts[b];
    }

    rep.recall.assign(num_buckets, std::vector<double>(preds.size(), 0.0));
    for (std::size_t m = 0; m < preds.size(); ++m) {
        rep.models.push_back(preds[m].model_name);
        std::vector<std::size_t> hits(num_buckets, 0);
        for (std::size_t u = 0; u < split.users.size(); ++u) {
            const auto& list = preds[m].lists[u];
            std::size_t limit = std::min(K, list.size());
            for (std::size_t r = 0; r < limit; ++r) {
                if (list[r] == split.users[u].test_target) {
                    ++hits[bucket_of[u]];
                    break;
                }
            }
        }
        for (std::size_t b = 0; b < num_buckets; ++b)
            if (rep.user_counts[b] > 0)
                rep.recall[b][m] = static_cast<double>(hits[b]) /
                                   static_cast<double>(rep.user_counts[b]);
    }
    return rep;
}

} // namespace seqrec
