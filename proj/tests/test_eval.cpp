#include <doctest.h>

#include <cmath>

#include "seqrec/baselines.hpp"
#include "seqrec/eval.hpp"
#include "seqrec/tgh.hpp"
#include "test_util.hpp"

using namespace seqrec;

namespace {

// Recommends a fixed list regardless of context.
class ConstantModel : public Recommender {
public:
    explicit ConstantModel(std::vector<ItemIndex> list) : list_(std::move(list)) {}
    std::vector<ItemIndex> recommend(std::span<const ItemIndex>, std::size_t K) const override {
        auto out = list_;
        if (out.size() > K) out.resize(K);
        return out;
    }

private:
    std::vector<ItemIndex> list_;
};

// Deterministic context-dependent model for thread-equality checks.
class HashModel : public Recommender {
public:
    explicit HashModel(ItemIndex n) : n_(n) {}
    std::vector<ItemIndex> recommend(std::span<const ItemIndex> ctx,
                                     std::size_t K) const override {
        std::vector<ItemIndex> out;
        ItemIndex h = ctx.empty() ? 0 : ctx.back();
        for (std::size_t i = 0; i < K; ++i) out.push_back((h * 31 + ItemIndex(i) * 7) % n_);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    ItemIndex n_;
};

PredictionSet preds_of(const std::string& name,
                       const std::vector<std::vector<ItemIndex>>& lists, std::size_t k_max) {
    PredictionSet p;
    p.model_name = name;
    p.k_max = k_max;
    p.lists = lists;
    return p;
}

} // namespace

TEST_CASE("run_model produces one aligned list per user") {
    auto split = test::make_split({{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 0, 1}}, 4);
    ConstantModel m({3, 1, 0});
    auto p = run_model(m, split, 2, "const");
    REQUIRE(p.lists.size() == 3);
    for (const auto& l : p.lists) CHECK(l == std::vector<ItemIndex>{3, 1});
}

TEST_CASE("recall and ndcg hand examples") {
    // Users with targets 3, 0, 2; constant list (3, 1, 0).
    auto split = test::make_split({{0, 1, 2, 3}, {1, 2, 3, 0}, {0, 3, 1, 2}}, 4);
    auto p = preds_of("m", {{3, 1, 0}, {3, 1, 0}, {3, 1, 0}}, 3);

    SUBCASE("recall counts targets within K") {
        CHECK(recall_at_k(p, split, 1) == doctest::Approx(1.0 / 3.0));
        CHECK(recall_at_k(p, split, 3) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("ndcg discounts by log2(rank+1)") {
        // target 3 at rank 1 -> 1; target 0 at rank 3 -> 1/log2(4) = 0.5;
        // target 2 absent -> 0.
        CHECK(ndcg_at_k(p, split, 3) == doctest::Approx((1.0 + 0.5 + 0.0) / 3.0).epsilon(1e-12));
    }
    SUBCASE("rank 3 at K=10 contributes exactly 0.5") {
        auto one = test::make_split({{1, 2, 3, 0}}, 4);
        auto q = preds_of("m", {{3, 1, 0}}, 10);
        CHECK(ndcg_at_k(q, one, 10) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("recall@1 equals ndcg@1") {
        CHECK(recall_at_k(p, split, 1) == ndcg_at_k(p, split, 1));
    }
    SUBCASE("K above k_max is rejected") {
        CHECK_THROWS_AS(recall_at_k(p, split, 5), ConfigError);
    }
    SUBCASE("misaligned prediction set is rejected") {
        auto bad = preds_of("m", {{3}}, 3);
        CHECK_THROWS_AS(recall_at_k(bad, split, 1), DataError);
    }
}

TEST_CASE("metrics match a definition-literal oracle on random predictions") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> len(3, 10);
    std::uniform_int_distribution<ItemIndex> item(0, 24);
    std::vector<std::vector<ItemIndex>> seqs;
    for (int u = 0; u < 30; ++u) {
        std::vector<ItemIndex> s;
        int n = len(rng);
        for (int t = 0; t < n; ++t) s.push_back(item(rng));
        seqs.push_back(s);
    }
    auto split = test::make_split(seqs, 25);

    std::vector<std::vector<ItemIndex>> lists;
    for (int u = 0; u < 30; ++u) {
        std::vector<ItemIndex> l;
        while (l.size() < 10) {
            ItemIndex c = item(rng);
            if (std::find(l.begin(), l.end(), c) == l.end()) l.push_back(c);
        }
        lists.push_back(l);
    }
    auto p = preds_of("rand", lists, 10);

    for (std::size_t K : {1, 5, 10}) {
        double recall = 0, ndcg = 0;
        for (int u = 0; u < 30; ++u) {
            for (std::size_t r = 0; r < K; ++r) {
                if (lists[u][r] == split.users[u].test_target) {
                    recall += 1.0;
                    ndcg += 1.0 / std::log2(double(r) + 2.0);
                    break;
                }
            }
        }
        CHECK(recall_at_k(p, split, K) == doctest::Approx(recall / 30.0).epsilon(1e-12));
        CHECK(ndcg_at_k(p, split, K) == doctest::Approx(ndcg / 30.0).epsilon(1e-12));
        CHECK(ndcg_at_k(p, split, K) <= recall_at_k(p, split, K) + 1e-12);
    }
}

TEST_CASE("format_percent rounds half to even at two decimals") {
    CHECK(format_percent(0.123456) == "12.35");
    CHECK(format_percent(0.5) == "50.00");
    CHECK(format_percent(0.0) == "0.00");
    CHECK(format_percent(1.0) == "100.00");
    // Exact dyadic halfway cases: 1/32 -> 3.125% -> 3.12 (down to even),
    // 3/32 -> 9.375% -> 9.38 (up to even).
    CHECK(format_percent(1.0 / 32.0) == "3.12");
    CHECK(format_percent(3.0 / 32.0) == "9.38");
}

TEST_CASE("evaluate builds one row per model and K, and reports round-trip") {
    auto split = test::make_split({{0, 1, 2, 3}, {1, 2, 3, 0}}, 4);
    auto p1 = preds_of("a", {{3, 1}, {0, 1}}, 5);
    auto p2 = preds_of("b", {{1, 2}, {1, 2}}, 5);
    auto table = evaluate({p1, p2}, split, {1, 5});
    REQUIRE(table.rows.size() == 4);
    CHECK(table.rows[0].model == "a");
    CHECK(table.rows[0].K == 1);
    CHECK(table.rows[0].recall == doctest::Approx(1.0));
    CHECK(table.rows[3].model == "b");
    CHECK(table.rows[3].recall == doctest::Approx(0.0));

    auto parsed = metrics_from_json(metrics_to_json(table));
    REQUIRE(parsed.rows.size() == table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(parsed.rows[i].model == table.rows[i].model);
        CHECK(parsed.rows[i].K == table.rows[i].K);
        CHECK(parsed.rows[i].recall == table.rows[i].recall);
        CHECK(parsed.rows[i].ndcg == table.rows[i].ndcg);
    }

    CHECK(evaluate({}, split, {1, 5}).rows.empty());
    auto text = metrics_to_text(table);
    CHECK(text.find("Recall@K") != std::string::npos);
}

TEST_CASE("prediction files round-trip") {
    auto split = test::make_split({{0, 1, 2, 3}, {1, 2, 3, 0}}, 4);
    auto p = preds_of("m", {{3, 1}, {0}}, 2);
    test::TempDir tmp("pred");
    write_predictions(p, split, tmp.path("p.txt"));
    CHECK(test::read_file(tmp.path("p.txt")) == "u0\ti3,i1\nu1\ti0\n");

    auto q = read_predictions(tmp.path("p.txt"), split, "m");
    CHECK(q.lists == p.lists);
    CHECK(q.k_max == 2);

    SUBCASE("unknown user is rejected with its line number") {
        test::write_file(tmp.path("bad.txt"), "u0\ti3\nu9\ti0\n");
        CHECK_THROWS_WITH_AS(read_predictions(tmp.path("bad.txt"), split, "m"),
                             doctest::Contains(":2"), DataError);
    }
    SUBCASE("unknown item is rejected") {
        test::write_file(tmp.path("bad.txt"), "u0\tmystery\nu1\ti0\n");
        CHECK_THROWS_AS(read_predictions(tmp.path("bad.txt"), split, "m"), DataError);
    }
    SUBCASE("missing user is rejected") {
        test::write_file(tmp.path("bad.txt"), "u0\ti3\n");
        CHECK_THROWS_WITH_AS(read_predictions(tmp.path("bad.txt"), split, "m"),
                             doctest::Contains("u1"), DataError);
    }
    SUBCASE("duplicate user is rejected") {
        test::write_file(tmp.path("bad.txt"), "u0\ti3\nu0\ti0\n");
        CHECK_THROWS_AS(read_predictions(tmp.path("bad.txt"), split, "m"), DataError);
    }
}

TEST_CASE("metrics are identical across thread counts") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> len(3, 12);
    std::uniform_int_distribution<ItemIndex> item(0, 49);
    std::vector<std::vector<ItemIndex>> seqs;
    for (int u = 0; u < 200; ++u) {
        std::vector<ItemIndex> s;
        int n = len(rng);
        for (int t = 0; t < n; ++t) s.push_back(item(rng));
        seqs.push_back(s);
    }
    auto split = test::make_split(seqs, 50);
    HashModel m(50);
    auto p1 = run_model(m, split, 10, "hash", 1);
    auto p4 = run_model(m, split, 10, "hash", 4);
    CHECK(p1.lists == p4.lists);
    for (std::size_t K : {1, 5, 10}) {
        CHECK(std::abs(recall_at_k(p1, split, K) - recall_at_k(p4, split, K)) <= 1e-12);
        CHECK(std::abs(ndcg_at_k(p1, split, K) - ndcg_at_k(p4, split, K)) <= 1e-12);
    }
}

TEST_CASE("model failures name the user") {
    class Failing : public Recommender {
    public:
        std::vector<ItemIndex> recommend(std::span<const ItemIndex> ctx,
                                         std::size_t) const override {
            if (ctx.back() == 2) throw std::runtime_error("boom");
            return {0};
        }
    };
    auto split = test::make_split({{0, 1, 2, 3}}, 4);
    Failing m;
    CHECK_THROWS_WITH_AS(run_model(m, split, 5, "failing"), doctest::Contains("u0"), DataError);
}
