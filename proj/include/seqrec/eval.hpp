#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "seqrec/corpus.hpp"
#include "seqrec/tgh.hpp"
#include "seqrec/types.hpp"

namespace seqrec {

// Next-item recommender over a user's context sequence. Implementations must
// be safe to call concurrently when concurrent() is true.
class Recommender {
public:
    virtual ~Recommender() = default;
    virtual std::vector<ItemIndex> recommend(std::span<const ItemIndex> context,
                                             std::size_t K) const = 0;
    virtual bool concurrent() const { return true; }
};

struct PredictionSet {
    std::string model_name;
    std::size_t k_max = 10;
    // Aligned with SplitDataset::users; lists may be shorter than k_max.
    std::vector<std::vector<ItemIndex>> lists;
};

PredictionSet run_model(const Recommender& model, const SplitDataset& split, std::size_t k_max,
                        const std::string& model_name, unsigned threads = 1);

double recall_at_k(const PredictionSet& p, const SplitDataset& split, std::size_t K);
double ndcg_at_k(const PredictionSet& p, const SplitDataset& split, std::size_t K);

struct MetricsRow {
    std::string model;
    std::size_t K = 0;
    double recall = 0.0;
    double ndcg = 0.0;
    std::size_t num_users = 0;
};

struct MetricsTable {
    std::vector<MetricsRow> rows;
};

MetricsTable evaluate(const std::vector<PredictionSet>& preds, const SplitDataset& split,
                      const std::vector<std::size_t>& ks);

// Percentage with 2 decimals, round-half-even, matching the report style.
std::string format_percent(double fraction);

std::string metrics_to_json(const MetricsTable& t);
MetricsTable metrics_from_json(const std::string& json_text);
std::string metrics_to_text(const MetricsTable& t);
void emit_report(const MetricsTable& t, const std::string& json_path,
                 const std::string& text_path);

// Interchange format: one line per user, `user_id<TAB>item1,item2,...`.
void write_predictions(const PredictionSet& p, const SplitDataset& split,
                       const std::string& path);
PredictionSet read_predictions(const std::string& path, const SplitDataset& split,
                               const std::string& model_name);

} // namespace seqrec
