#include "seqrec/eval.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace seqrec {

PredictionSet run_model(const Recommender& model, const SplitDataset& split, std::size_t k_max,
                        const std::string& model_name, unsigned threads) {
    PredictionSet p;
    p.model_name = model_name;
    p.k_max = k_max;
    p.lists.resize(split.users.size());

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t u = begin; u < end; ++u) {
            auto ctx = split.users[u].test_context();
            try {
                auto list = model.recommend(ctx, k_max);
                if (list.size() > k_max) list.resize(k_max);
                p.lists[u] = std::move(list);
            } catch (const std::exception& e) {
                throw DataError("model '" + model_name + "' failed on user '" +
                                split.users[u].user_id + "': " + e.what());
            }
        }
    };

    if (threads <= 1 || !model.concurrent() || split.users.size() < 2) {
        work(0, split.users.size());
    } else {
        unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(split.users.size()));
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(n);
        std::size_t chunk = (split.users.size() + n - 1) / n;
        for (unsigned t = 0; t < n; ++t) {
            std::size_t begin = t * chunk;
            std::size_t end = std::min(begin + chunk, split.users.size());
            pool.emplace_back([&, t, begin, end] {
                try {
                    work(begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }
    return p;
}

namespace {

// 0 when the target is not in the top K, else its 1-based rank.
std::size_t rank_of_target(const std::vector<ItemIndex>& list, ItemIndex target,
                           std::size_t K) {
    std::size_t limit = std::min(K, list.size());
    for (std::size_t r = 0; r < limit; ++r)
        if (list[r] == target) return r + 1;
    return 0;
}

void check_alignment(const PredictionSet& p, const SplitDataset& split, std::size_t K) {
    if (p.lists.size() != split.users.size())
        throw DataError("prediction set for '" + p.model_name + "' has " +
                        std::to_string(p.lists.size()) + " users, split has " +
                        std::to_string(split.users.size()));
    if (K > p.k_max)
        throw ConfigError("K=" + std::to_string(K) + " exceeds prediction list size K_max=" +
                          std::to_string(p.k_max));
}

} // namespace

double recall_at_k(const PredictionSet& p, const SplitDataset& split, std::size_t K) {
    check_alignment(p, split, K);
    if (split.users.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t u = 0; u < split.users.size(); ++u)
        if (rank_of_target(p.lists[u], split.users[u].test_target, K) > 0) ++hits;
    return static_cast<double>(hits) / static_cast<double>(split.users.size());
}

double ndcg_at_k(const PredictionSet& p, const SplitDataset& split, std::size_t K) {
    check_alignment(p, split, K);
    if (split.users.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t u = 0; u < split.users.size(); ++u) {
        std::size_t rank = rank_of_target(p.lists[u], split.users[u].test_target, K);
        if (rank > 0) sum += 1.0 / std::log2(static_cast<double>(rank) + 1.0);
    }
    return sum / static_cast<double>(split.users.size());
}

MetricsTable evaluate(const std::vector<PredictionSet>& preds, const SplitDataset& split,
                      const std::vector<std::size_t>& ks) {
    MetricsTable t;
    for (const auto& p : preds) {
        for (std::size_t K : ks) {
            MetricsRow row;
            row.model = p.model_name;
            row.K = K;
            row.recall = recall_at_k(p, split, K);
            row.ndcg = ndcg_at_k(p, split, K);
            row.num_users = split.users.size();
            t.rows.push_back(row);
        }
    }
    return t;
}

std::string format_percent(double fraction) {
    // Round-half-even at two decimal places of the percentage.
    double scaled = fraction * 10000.0;
    int prev = std::fegetround();
    std::fesetround(FE_TONEAREST);
    double rounded = std::nearbyint(scaled);
    std::fesetround(prev);
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << rounded / 100.0;
    return os.str();
}

std::string metrics_to_json(const MetricsTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        rows.push_back({{"model", r.model},
                        {"k", r.K},
                        {"recall", r.recall},
                        {"ndcg", r.ndcg},
                        {"recall_pct", format_percent(r.recall)},
                        {"ndcg_pct", format_percent(r.ndcg)},
                        {"num_users", r.num_users}});
    }
    nlohmann::json doc{{"metrics", rows}};
    return doc.dump(2) + "\n";
}

MetricsTable metrics_from_json(const std::string& json_text) {
    MetricsTable t;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad metrics JSON: ") + e.what());
    }
    for (const auto& r : doc.at("metrics")) {
        MetricsRow row;
        row.model = r.at("model").get<std::string>();
        row.K = r.at("k").get<std::size_t>();
        row.recall = r.at("recall").get<double>();
        row.ndcg = r.at("ndcg").get<double>();
        row.num_users = r.at("num_users").get<std::size_t>();
        t.rows.push_back(row);
    }
    return t;
}

std::string metrics_to_text(const MetricsTable& t) {
    std::size_t model_w = 5;
    for (const auto& r : t.rows) model_w = std::max(model_w, r.model.size());
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(model_w + 2)) << "model" << std::right
       << std::setw(4) << "K" << std::setw(12) << "Recall@K(%)" << std::setw(12)
       << "NDCG@K(%)" << std::setw(10) << "users" << '\n';
    for (const auto& r : t.rows) {
        os << std::left << std::setw(static_cast<int>(model_w + 2)) << r.model << std::right
           << std::setw(4) << r.K << std::setw(12) << format_percent(r.recall) << std::setw(12)
           << format_percent(r.ndcg) << std::setw(10) << r.num_users << '\n';
    }
    return os.str();
}

void emit_report(const MetricsTable& t, const std::string& json_path,
                 const std::string& text_path) {
    std::ofstream js(json_path);
    if (!js) throw DataError("cannot write " + json_path);
    js << metrics_to_json(t);
    std::ofstream txt(text_path);
    if (!txt) throw DataError("cannot write " + text_path);
    txt << metrics_to_text(t);
}

void write_predictions(const PredictionSet& p, const SplitDataset& split,
                       const std::string& path) {
    if (p.lists.size() != split.users.size())
        throw DataError("prediction set does not align with the split");
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    for (std::size_t u = 0; u < split.users.size(); ++u) {
        out << split.users[u].user_id << '\t';
        for (std::size_t i = 0; i < p.lists[u].size(); ++i) {
            if (i) out << ',';
            out << split.item_vocab.decode(p.lists[u][i]);
        }
        out << '\n';
    }
}

PredictionSet read_predictions(const std::string& path, const SplitDataset& split,
                               const std::string& model_name) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open prediction file: " + path);

    std::unordered_map<std::string, std::size_t> user_index;
    for (std::size_t u = 0; u < split.users.size(); ++u)
        user_index[split.users[u].user_id] = u;

    PredictionSet p;
    p.model_name = model_name;
    p.lists.resize(split.users.size());
    std::vector<std::uint8_t> seen(split.users.size(), 0);
    std::size_t k_max = 0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected <user>\\t<items>");
        std::string user = line.substr(0, tab);
        auto it = user_index.find(user);
        if (it == user_index.end())
            throw DataError(path + ":" + std::to_string(line_no) + ": unknown user id '" +
                            user + "'");
        if (seen[it->second])
            throw DataError(path + ":" + std::to_string(line_no) + ": duplicate user id '" +
                            user + "'");
        seen[it->second] = 1;

        std::vector<ItemIndex> list;
        std::unordered_set<ItemIndex> dedup;
        std::istringstream items(line.substr(tab + 1));
        std::string item;
        while (std::getline(items, item, ',')) {
            if (item.empty()) continue;
            auto idx = split.item_vocab.encode(item);
            if (!idx)
                throw DataError(path + ":" + std::to_string(line_no) + ": unknown item id '" +
                                item + "'");
            if (!dedup.insert(*idx).second)
                throw DataError(path + ":" + std::to_string(line_no) + ": duplicate item '" +
                                item + "' in prediction list");
            list.push_back(*idx);
        }
        k_max = std::max(k_max, list.size());
        p.lists[it->second] = std::move(list);
    }
    for (std::size_t u = 0; u < split.users.size(); ++u)
        if (!seen[u])
            throw DataError(path + ": missing prediction line for user '" +
                            split.users[u].user_id + "'");
    p.k_max = std::max<std::size_t>(k_max, 1);
    return p;
}

} // namespace seqrec
