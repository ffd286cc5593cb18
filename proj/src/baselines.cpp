#include "seqrec/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

namespace seqrec {

namespace {

bool better(const ScoredItem& a, const ScoredItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
}

RecommendationList top_k(std::vector<ScoredItem>&& scored, std::size_t K) {
    if (scored.size() > K) {
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(K),
                          scored.end(), better);
        scored.resize(K);
    } else {
        std::sort(scored.begin(), scored.end(), better);
    }
    return scored;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot(const float* a, const float* b, std::size_t dim) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
}

} // namespace

RecommendationList sem_nn_rank(const EmbeddingMatrix& emb, ItemIndex anchor, std::size_t K,
                               const std::unordered_set<ItemIndex>& exclude) {
    std::vector<ScoredItem> scored;
    scored.reserve(emb.num_rows);
    for (ItemIndex i = 0; i < emb.num_rows; ++i) {
        if (i == anchor || exclude.contains(i)) continue;
        scored.push_back({i, cosine(emb, anchor, i)});
    }
    return top_k(std::move(scored), K);
}

double IdLastModel::score(ItemIndex anchor, ItemIndex target) const {
    return dot(anchor_table.data() + static_cast<std::size_t>(anchor) * dim,
               target_table.data() + static_cast<std::size_t>(target) * dim, dim);
}

IdLastModel train_id_last(const SplitDataset& split, const BprHyperparams& hp) {
    std::vector<std::pair<ItemIndex, ItemIndex>> pairs;
    std::vector<double> item_freq(split.num_items(), 0.0);
    for (const auto& u : split.users) {
        const auto& seq = u.train_prefix;
        for (std::size_t t = 0; t + 1 < seq.size(); ++t) pairs.emplace_back(seq[t], seq[t + 1]);
        for (ItemIndex i : seq) item_freq[i] += 1.0;
    }
    if (pairs.empty()) throw DataError("no training pairs: all train prefixes have length < 2");

    IdLastModel m;
    m.dim = hp.dim;
    m.num_items = split.num_items();
    m.hp = hp;

    std::mt19937_64 rng(hp.seed);
    const double scale = 0.1 / std::sqrt(static_cast<double>(hp.dim));
    std::uniform_real_distribution<double> init(-scale, scale);
    m.anchor_table.resize(static_cast<std::size_t>(m.num_items) * m.dim);
    m.target_table.resize(m.anchor_table.size());
    for (auto& v : m.anchor_table) v = static_cast<float>(init(rng));
    for (auto& v : m.target_table) v = static_cast<float>(init(rng));

    std::uniform_int_distribution<std::size_t> pick_pair(0, pairs.size() - 1);
    std::uniform_int_distribution<ItemIndex> pick_item(0, m.num_items - 1);
    std::discrete_distribution<ItemIndex> pick_popular(item_freq.begin(), item_freq.end());

    const std::size_t total_steps = hp.epochs * pairs.size();
    std::size_t step = 0;
    for (std::size_t e = 0; e < hp.epochs; ++e) {
        for (std::size_t s = 0; s < pairs.size(); ++s, ++step) {
            double lr = hp.learning_rate *
                        (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
            auto [a, pos] = pairs[pick_pair(rng)];
            float* va = m.anchor_table.data() + static_cast<std::size_t>(a) * m.dim;
            float* vp = m.target_table.data() + static_cast<std::size_t>(pos) * m.dim;
            double x_pos = dot(va, vp, m.dim);
            for (std::size_t n = 0; n < hp.negatives; ++n) {
                ItemIndex neg;
                do {
                    neg = hp.popularity_negatives ? pick_popular(rng) : pick_item(rng);
                } while (neg == pos);
                float* vn = m.target_table.data() + static_cast<std::size_t>(neg) * m.dim;
                double d = x_pos - dot(va, vn, m.dim);
                if (!std::isfinite(d))
                    throw DataError("BPR training diverged (non-finite loss); lower the "
                                    "learning rate");
                double g = sigmoid(-d);
                for (std::size_t k = 0; k < m.dim; ++k) {
                    double ak = va[k];
                    va[k] = static_cast<float>(ak + lr * g * (vp[k] - vn[k]));
                    vp[k] = static_cast<float>(vp[k] + lr * g * ak);
                    vn[k] = static_cast<float>(vn[k] - lr * g * ak);
                }
                x_pos = dot(va, vp, m.dim);
            }
        }
    }
    return m;
}

BprGradient bpr_gradient(const IdLastModel& m, ItemIndex anchor, ItemIndex pos, ItemIndex neg) {
    const float* va = m.anchor_table.data() + static_cast<std::size_t>(anchor) * m.dim;
    const float* vp = m.target_table.data() + static_cast<std::size_t>(pos) * m.dim;
    const float* vn = m.target_table.data() + static_cast<std::size_t>(neg) * m.dim;
    double d = dot(va, vp, m.dim) - dot(va, vn, m.dim);
    double g = sigmoid(-d); // d/dd of -log sigmoid(d) is -sigmoid(-d)
    BprGradient out;
    out.loss = -std::log(sigmoid(d));
    out.d_anchor.resize(m.dim);
    out.d_pos_target.resize(m.dim);
    out.d_neg_target.resize(m.dim);
    for (std::size_t k = 0; k < m.dim; ++k) {
        out.d_anchor[k] = -g * (static_cast<double>(vp[k]) - vn[k]);
        out.d_pos_target[k] = -g * va[k];
        out.d_neg_target[k] = g * va[k];
    }
    return out;
}

RecommendationList id_last_rank(const IdLastModel& m, ItemIndex anchor, std::size_t K) {
    std::vector<ScoredItem> scored;
    scored.reserve(m.num_items);
    for (ItemIndex i = 0; i < m.num_items; ++i) {
        if (i == anchor) continue;
        scored.push_back({i, m.score(anchor, i)});
    }
    return top_k(std::move(scored), K);
}

RecommendationList id_plus_sem_rank(const IdLastModel& m, const EmbeddingMatrix& emb,
                                    ItemIndex anchor, std::size_t K, const FusionSpec& fusion) {
    std::vector<ScoredItem> scored;
    scored.reserve(m.num_items);
    for (ItemIndex i = 0; i < m.num_items; ++i) {
        if (i == anchor) continue;
        scored.push_back(
            {i, fusion.id_weight * m.score(anchor, i) + fusion.sem_weight * cosine(emb, anchor, i)});
    }
    return top_k(std::move(scored), K);
}

RecommendationList count_last_rank(const TransitionGraph& g, ItemIndex anchor, std::size_t K) {
    std::vector<ScoredItem> scored;
    if (anchor < g.num_items()) {
        auto nbrs = g.neighbors(anchor);
        auto cnts = g.counts(anchor);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            if (nbrs[i] == anchor) continue;
            scored.push_back({nbrs[i], static_cast<double>(cnts[i])});
        }
    }
    return top_k(std::move(scored), K);
}

namespace {

void write_table_srae(std::ostream& out, const std::vector<float>& table, std::size_t dim,
                      const ItemVocab& vocab) {
    auto u16 = [&](std::uint16_t v) {
        char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
        out.write(b, 2);
    };
    auto u32 = [&](std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out.write(b, 4);
    };
    auto u64 = [&](std::uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out.write(b, 8);
    };
    out.write("SRAE", 4);
    out.put(1);
    u32(static_cast<std::uint32_t>(dim));
    u64(vocab.size());
    for (ItemIndex i = 0; i < vocab.size(); ++i) {
        const auto& id = vocab.decode(i);
        u16(static_cast<std::uint16_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
        for (std::size_t k = 0; k < dim; ++k) {
            float f = table[static_cast<std::size_t>(i) * dim + k];
            std::uint32_t v;
            std::memcpy(&v, &f, 4);
            u32(v);
        }
    }
}

std::vector<float> read_table_srae(std::istream& in, std::size_t expect_dim,
                                   const ItemVocab& vocab, const std::string& path) {
    auto u16 = [&] {
        unsigned char b[2];
        in.read(reinterpret_cast<char*>(b), 2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    };
    auto u32 = [&] {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        return v;
    };
    auto u64 = [&] {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return v;
    };
    char magic[4] = {};
    in.read(magic, 4);
    char version = 0;
    in.get(version);
    if (std::memcmp(magic, "SRAE", 4) != 0 || version != 1)
        throw DataError(path + ": malformed model table block");
    std::uint32_t dim = u32();
    std::uint64_t count = u64();
    if (dim != expect_dim || count != vocab.size())
        throw DataError(path + ": model table shape does not match manifest/vocabulary");
    std::vector<float> table(static_cast<std::size_t>(count) * dim);
    for (std::uint64_t r = 0; r < count; ++r) {
        std::uint16_t id_len = u16();
        std::string id(id_len, '\0');
        in.read(id.data(), id_len);
        if (id != vocab.decode(static_cast<ItemIndex>(r)))
            throw DataError(path + ": model table item order does not match the vocabulary");
        for (std::uint32_t k = 0; k < dim; ++k) {
            std::uint32_t v = u32();
            float f;
            std::memcpy(&f, &v, 4);
            table[r * dim + k] = f;
        }
    }
    if (!in) throw DataError(path + ": truncated model file");
    return table;
}

} // namespace

void IdLastModel::save(const std::string& path, const ItemVocab& vocab) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    nlohmann::json manifest{{"format", "id-last-bpr"},
                            {"dim", dim},
                            {"num_items", num_items},
                            {"learning_rate", hp.learning_rate},
                            {"epochs", hp.epochs},
                            {"negatives", hp.negatives},
                            {"seed", hp.seed},
                            {"popularity_negatives", hp.popularity_negatives}};
    std::string text = manifest.dump();
    std::uint32_t len = static_cast<std::uint32_t>(text.size());
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((len >> (8 * i)) & 0xff);
    out.write(b, 4);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    write_table_srae(out, anchor_table, dim, vocab);
    write_table_srae(out, target_table, dim, vocab);
}

IdLastModel IdLastModel::load(const std::string& path, const ItemVocab& vocab) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    std::string text(len, '\0');
    in.read(text.data(), len);
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": bad model manifest: " + e.what());
    }
    IdLastModel m;
    m.dim = manifest.at("dim").get<std::size_t>();
    m.num_items = manifest.at("num_items").get<ItemIndex>();
    m.hp.dim = m.dim;
    m.hp.learning_rate = manifest.at("learning_rate").get<double>();
    m.hp.epochs = manifest.at("epochs").get<std::size_t>();
    m.hp.negatives = manifest.at("negatives").get<std::size_t>();
    m.hp.seed = manifest.at("seed").get<std::uint64_t>();
    m.hp.popularity_negatives = manifest.at("popularity_negatives").get<bool>();
    if (m.num_items != vocab.size())
        throw DataError(path + ": model item count does not match the vocabulary");
    m.anchor_table = read_table_srae(in, m.dim, vocab, path);
    m.target_table = read_table_srae(in, m.dim, vocab, path);
    return m;
}

} // namespace seqrec
