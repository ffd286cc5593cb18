#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <optional>
#include <string>
#include <vector>

#include "seqrec/corpus.hpp"
#include "seqrec/types.hpp"

namespace seqrec {

// Directed item-transition graph in CSR form. Adjacency lists are sorted by
// target index; stored counts are always >= 1.
class TransitionGraph {
public:
    static TransitionGraph build(const SplitDataset& split);
    static TransitionGraph from_edges(ItemIndex num_items,
                                      const std::vector<std::tuple<ItemIndex, ItemIndex, std::uint32_t>>& edges);

    ItemIndex num_items() const { return num_items_; }
    std::size_t num_edges() const { return targets_.size(); }

    std::uint32_t count(ItemIndex src, ItemIndex dst) const;

    // log(1+N_ij) / max_j' log(1+N_ij'); 0 for absent edges.
    double edge_weight(ItemIndex src, ItemIndex dst) const;

    std::size_t out_degree(ItemIndex src) const {
        return offsets_[src + 1] - offsets_[src];
    }
    std::span<const ItemIndex> neighbors(ItemIndex src) const {
        return {targets_.data() + offsets_[src], out_degree(src)};
    }
    std::span<const std::uint32_t> counts(ItemIndex src) const {
        return {counts_.data() + offsets_[src], out_degree(src)};
    }

    void save(const std::string& path) const;
    static TransitionGraph load(const std::string& path);

private:
    ItemIndex num_items_ = 0;
    std::vector<std::uint64_t> offsets_; // num_items + 1
    std::vector<ItemIndex> targets_;
    std::vector<std::uint32_t> counts_;
    std::vector<double> max_log_; // per source: log(1 + max outgoing count), 0 if none
};

// item -> minimum hop distance in {1..k}; the anchor itself is excluded.
struct HopNeighborhood {
    std::map<ItemIndex, int> entries;
    bool anchor_in_graph = true;
};

// Breadth-first expansion along directed edges. When cap is set, each hop
// frontier stops after cap distinct new items, visiting neighbors in ascending
// target order. Anchors with no outgoing edges yield an empty neighborhood.
HopNeighborhood k_hop_neighborhood(const TransitionGraph& g, ItemIndex anchor, int k,
                                   std::optional<std::size_t> cap = std::nullopt);

// Minimum hop distance from anchor to target, searching at most max_hop hops.
std::optional<int> hop_distance(const TransitionGraph& g, ItemIndex anchor, ItemIndex target,
                                int max_hop);

struct GraphStats {
    std::size_t num_users = 0;
    std::size_t num_items = 0;
    std::size_t num_edges = 0;
    double avg_seq_len = 0.0;
    double avg_out_degree = 0.0;  // edges / sources with >=1 outgoing edge
    double avg_edge_weight = 0.0; // mean raw count N_ij over edges
    std::map<int, double> coverage; // hop k -> percentage of covered test targets
};

std::map<int, double> coverage_at_k(const TransitionGraph& g, const SplitDataset& split,
                                    const std::vector<int>& ks);

GraphStats graph_stats(const TransitionGraph& g, const SplitDataset& split,
                       const std::vector<int>& coverage_ks = {1, 2, 3});

} // namespace seqrec
