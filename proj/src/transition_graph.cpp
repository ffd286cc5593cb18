#include "seqrec/transition_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>
#include <tuple>
#include <unordered_map>

namespace seqrec {

namespace {

constexpr char kMagic[4] = {'S', 'R', 'T', 'G'};
constexpr std::uint8_t kVersion = 0x01;

template <typename T>
void write_le(std::ostream& out, T v) {
    char b[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
        b[i] = static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
    out.write(b, sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    unsigned char b[sizeof(T)];
    in.read(reinterpret_cast<char*>(b), sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return static_cast<T>(v);
}

} // namespace

TransitionGraph TransitionGraph::build(const SplitDataset& split) {
    std::vector<std::unordered_map<ItemIndex, std::uint32_t>> adj(split.num_items());
    for (const auto& u : split.users) {
        const auto& seq = u.train_prefix;
        for (std::size_t t = 0; t + 1 < seq.size(); ++t) ++adj[seq[t]][seq[t + 1]];
    }

    TransitionGraph g;
    g.num_items_ = split.num_items();
    g.offsets_.assign(g.num_items_ + 1, 0);
    std::size_t total = 0;
    for (ItemIndex i = 0; i < g.num_items_; ++i) total += adj[i].size();
    g.targets_.reserve(total);
    g.counts_.reserve(total);
    g.max_log_.assign(g.num_items_, 0.0);

    std::vector<std::pair<ItemIndex, std::uint32_t>> row;
    for (ItemIndex i = 0; i < g.num_items_; ++i) {
        row.assign(adj[i].begin(), adj[i].end());
        std::sort(row.begin(), row.end());
        std::uint32_t max_count = 0;
        for (const auto& [dst, c] : row) {
            g.targets_.push_back(dst);
            g.counts_.push_back(c);
            max_count = std::max(max_count, c);
        }
        if (max_count > 0) g.max_log_[i] = std::log1p(static_cast<double>(max_count));
        g.offsets_[i + 1] = g.targets_.size();
    }
    return g;
}

TransitionGraph TransitionGraph::from_edges(
    ItemIndex num_items,
    const std::vector<std::tuple<ItemIndex, ItemIndex, std::uint32_t>>& edges) {
    std::vector<std::unordered_map<ItemIndex, std::uint32_t>> adj(num_items);
    for (const auto& [src, dst, c] : edges) {
        if (c == 0) continue;
        adj[src][dst] += c;
    }
    TransitionGraph g;
    g.num_items_ = num_items;
    g.offsets_.assign(num_items + 1, 0);
    g.max_log_.assign(num_items, 0.0);
    std::vector<std::pair<ItemIndex, std::uint32_t>> row;
    for (ItemIndex i = 0; i < num_items; ++i) {
        row.assign(adj[i].begin(), adj[i].end());
        std::sort(row.begin(), row.end());
        std::uint32_t max_count = 0;
        for (const auto& [dst, c] : row) {
            g.targets_.push_back(dst);
            g.counts_.push_back(c);
            max_count = std::max(max_count, c);
        }
        if (max_count > 0) g.max_log_[i] = std::log1p(static_cast<double>(max_count));
        g.offsets_[i + 1] = g.targets_.size();
    }
    return g;
}

std::uint32_t TransitionGraph::count(ItemIndex src, ItemIndex dst) const {
    auto nbrs = neighbors(src);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), dst);
    if (it == nbrs.end() || *it != dst) return 0;
    return counts_[offsets_[src] + static_cast<std::size_t>(it - nbrs.begin())];
}

double TransitionGraph::edge_weight(ItemIndex src, ItemIndex dst) const {
    std::uint32_t c = count(src, dst);
    if (c == 0) return 0.0;
    return std::log1p(static_cast<double>(c)) / max_log_[src];
}

void TransitionGraph::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write graph file: " + path);
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    write_le<std::uint32_t>(out, num_items_);
    write_le<std::uint64_t>(out, targets_.size());
    for (auto v : offsets_) write_le<std::uint64_t>(out, v);
    for (auto v : targets_) write_le<std::uint32_t>(out, v);
    for (auto v : counts_) write_le<std::uint32_t>(out, v);
}

TransitionGraph TransitionGraph::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open graph file: " + path);
    char magic[4] = {};
    in.read(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw DataError(path + ": not a transition-graph file (bad magic)");
    std::uint8_t version = 0;
    in.read(reinterpret_cast<char*>(&version), 1);
    if (version != kVersion)
        throw DataError(path + ": unsupported graph format version " + std::to_string(version));
    TransitionGraph g;
    g.num_items_ = read_le<std::uint32_t>(in);
    std::uint64_t num_edges = read_le<std::uint64_t>(in);
    g.offsets_.resize(g.num_items_ + 1);
    for (auto& v : g.offsets_) v = read_le<std::uint64_t>(in);
    g.targets_.resize(num_edges);
    for (auto& v : g.targets_) v = read_le<std::uint32_t>(in);
    g.counts_.resize(num_edges);
    for (auto& v : g.counts_) v = read_le<std::uint32_t>(in);
    if (!in) throw DataError(path + ": truncated graph file");
    g.max_log_.assign(g.num_items_, 0.0);
    for (ItemIndex i = 0; i < g.num_items_; ++i) {
        std::uint32_t max_count = 0;
        for (auto c : g.counts(i)) max_count = std::max(max_count, c);
        if (max_count > 0) g.max_log_[i] = std::log1p(static_cast<double>(max_count));
    }
    return g;
}

HopNeighborhood k_hop_neighborhood(const TransitionGraph& g, ItemIndex anchor, int k,
                                   std::optional<std::size_t> cap) {
    HopNeighborhood out;
    if (anchor >= g.num_items() || g.out_degree(anchor) == 0) {
        out.anchor_in_graph = false;
        return out;
    }
    std::vector<ItemIndex> frontier = {anchor};
    std::unordered_map<ItemIndex, int> dist;
    dist[anchor] = 0;
    for (int hop = 1; hop <= k && !frontier.empty(); ++hop) {
        std::vector<ItemIndex> next;
        // Frontier kept sorted so capped expansion is deterministic.
        std::sort(frontier.begin(), frontier.end());
        for (ItemIndex src : frontier) {
            for (ItemIndex dst : g.neighbors(src)) {
                if (dist.contains(dst)) continue;
                if (cap && next.size() >= *cap) break;
                dist[dst] = hop;
                out.entries[dst] = hop;
                next.push_back(dst);
            }
            if (cap && next.size() >= *cap) break;
        }
        frontier = std::move(next);
    }
    return out;
}

std::optional<int> hop_distance(const TransitionGraph& g, ItemIndex anchor, ItemIndex target,
                                int max_hop) {
    if (anchor >= g.num_items()) return std::nullopt;
    if (g.count(anchor, target) > 0) return 1; // fast path
    auto nbh = k_hop_neighborhood(g, anchor, max_hop);
    auto it = nbh.entries.find(target);
    if (it == nbh.entries.end()) return std::nullopt;
    return it->second;
}

std::map<int, double> coverage_at_k(const TransitionGraph& g, const SplitDataset& split,
                                    const std::vector<int>& ks) {
    int max_k = 0;
    for (int k : ks) max_k = std::max(max_k, k);
    std::map<int, std::size_t> covered;
    for (int k : ks) covered[k] = 0;
    for (const auto& u : split.users) {
        auto d = hop_distance(g, u.last_context_item(), u.test_target, max_k);
        if (!d) continue;
        for (int k : ks)
            if (*d <= k) ++covered[k];
    }
    std::map<int, double> out;
    double denom = split.users.empty() ? 1.0 : static_cast<double>(split.users.size());
    for (int k : ks) out[k] = 100.0 * static_cast<double>(covered[k]) / denom;
    return out;
}

GraphStats graph_stats(const TransitionGraph& g, const SplitDataset& split,
                       const std::vector<int>& coverage_ks) {
    GraphStats s;
    s.num_users = split.users.size();
    s.num_items = g.num_items();
    s.num_edges = g.num_edges();
    s.avg_seq_len = split.avg_seq_len;

    std::size_t sources = 0;
    std::uint64_t count_sum = 0;
    for (ItemIndex i = 0; i < g.num_items(); ++i) {
        if (g.out_degree(i) > 0) ++sources;
        for (auto c : g.counts(i)) count_sum += c;
    }
    if (sources > 0)
        s.avg_out_degree = static_cast<double>(g.num_edges()) / static_cast<double>(sources);
    if (g.num_edges() > 0)
        s.avg_edge_weight =
            static_cast<double>(count_sum) / static_cast<double>(g.num_edges());
    s.coverage = coverage_at_k(g, split, coverage_ks);
    return s;
}

} // namespace seqrec
