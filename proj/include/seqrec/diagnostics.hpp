#pragma once

#include <set>
#include <string>
#include <vector>

#include "seqrec/eval.hpp"
#include "seqrec/transition_graph.hpp"

namespace seqrec {

// Users whose test target ranks within the top K of their prediction list.
std::set<std::string> correct_set(const PredictionSet& p, const SplitDataset& split,
                                  std::size_t K);

// |a n b| / |a u b|; 1 when both sets are empty, 0 when exactly one is.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

struct OverlapMatrix {
    std::vector<std::string> models;
    std::vector<std::vector<double>> values; // values[i][j] = jaccard(i, j)
};

OverlapMatrix prediction_overlap(const std::vector<PredictionSet>& preds,
                                 const SplitDataset& split, std::size_t K);

struct HopBucketReport {
    // Bucket labels: "1", "2", ..., ">N or unreachable".
    std::vector<std::string> labels;
    std::vector<std::size_t> user_counts;
    std::vector<std::string> models;
    // recall[bucket][model], as a fraction; 0 for empty buckets.
    std::vector<std::vector<double>> recall;
};

HopBucketReport recall_by_hop(const TransitionGraph& g, const std::vector<PredictionSet>& preds,
                              const SplitDataset& split, std::size_t K, int max_hop = 3);

} // namespace seqrec
