#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "seqrec/tgh.hpp"
#include "test_util.hpp"

using namespace seqrec;

TEST_CASE("presets") {
    auto t1 = TghConfig::tgh1();
    REQUIRE(t1.anchors.size() == 1);
    CHECK(t1.anchors[0].offset == 0);
    CHECK(t1.anchors[0].hop_budgets == std::vector<std::size_t>{7, 2, 1});
    CHECK(t1.alpha == 0.5);
    CHECK(t1.list_size == 10);

    auto t2 = TghConfig::tgh2();
    REQUIRE(t2.anchors.size() == 2);
    CHECK(t2.anchors[0].offset == 0);
    CHECK(t2.anchors[0].hop_budgets == std::vector<std::size_t>{5, 1});
    CHECK(t2.anchors[1].offset == 1);
    CHECK(t2.anchors[1].hop_budgets == std::vector<std::size_t>{3, 1});

    CHECK(TghConfig::preset("tgh1").anchors.size() == 1);
    CHECK(TghConfig::preset("tgh2").anchors.size() == 2);
    CHECK_THROWS_AS(TghConfig::preset("tgh3"), ConfigError);
}

TEST_CASE("score_candidate") {
    SUBCASE("identical embeddings plus a sole hop-1 edge score 1.5") {
        auto emb = test::make_embeddings({{1, 0}, {1, 0}});
        auto g = TransitionGraph::from_edges(2, {{0, 1, 9}});
        CHECK(score_candidate(emb, g, 0, 1, 1, 0.5) == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("hop >= 2 drops the bonus term") {
        auto emb = test::make_embeddings({{1, 0}, {1, 0}});
        auto g = TransitionGraph::from_edges(2, {{0, 1, 9}});
        CHECK(score_candidate(emb, g, 0, 1, 2, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("partial cosine and partial weight: 0.6 + 0.5 * 2/3") {
        auto emb = test::make_embeddings({{1, 0}, {0.6f, 0.8f}, {0, 1}});
        auto g = TransitionGraph::from_edges(3, {{0, 1, 3}, {0, 2, 7}});
        CHECK(score_candidate(emb, g, 0, 1, 1, 0.5) ==
              doctest::Approx(0.6 + 0.5 * 2.0 / 3.0).epsilon(1e-6));
    }
    SUBCASE("alpha scales only the bonus") {
        auto emb = test::make_embeddings({{1, 0}, {0, 1}});
        auto g = TransitionGraph::from_edges(2, {{0, 1, 1}});
        CHECK(score_candidate(emb, g, 0, 1, 1, 0.0) == doctest::Approx(0.0));
        CHECK(score_candidate(emb, g, 0, 1, 1, 2.0) == doctest::Approx(2.0));
    }
}

TEST_CASE("retrieve_for_anchor") {
    SUBCASE("chain with budgets [1,1,1] keeps one candidate per hop") {
        auto g = TransitionGraph::from_edges(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
        auto emb = test::make_embeddings({{1, 0}, {1, 0}, {1, 0}, {1, 0}});
        std::vector<std::size_t> budgets{1, 1, 1};
        auto got = retrieve_for_anchor(g, emb, 0, budgets, 0.5, true);
        REQUIRE(got.size() == 3);
        std::vector<int> hops;
        for (const auto& c : got) hops.push_back(c.hop);
        std::sort(hops.begin(), hops.end());
        CHECK(hops == std::vector<int>{1, 2, 3});
    }
    SUBCASE("budget of 7 over 10 hop-1 neighbors matches exhaustive ranking") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::tuple<ItemIndex, ItemIndex, std::uint32_t>> edges;
            std::uniform_int_distribution<std::uint32_t> count(1, 8);
            for (ItemIndex j = 1; j <= 10; ++j) edges.emplace_back(0, j, count(rng));
            auto g = TransitionGraph::from_edges(11, edges);
            auto emb = test::random_embeddings(11, 6, rng);

            std::vector<std::size_t> budgets{7};
            auto got = retrieve_for_anchor(g, emb, 0, budgets, 0.5, true);

            std::vector<ScoredCandidate> all;
            for (ItemIndex j = 1; j <= 10; ++j)
                all.push_back({j, score_candidate(emb, g, 0, j, 1, 0.5), 0, 1});
            std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
                return a.score != b.score ? a.score > b.score : a.item < b.item;
            });
            all.resize(7);

            REQUIRE(got.size() == 7);
            std::sort(got.begin(), got.end(), [](const auto& a, const auto& b) {
                return a.score != b.score ? a.score > b.score : a.item < b.item;
            });
            for (std::size_t i = 0; i < 7; ++i) {
                CHECK(got[i].item == all[i].item);
                CHECK(got[i].score == doctest::Approx(all[i].score).epsilon(1e-12));
            }
        }
    }
    SUBCASE("zero hop-1 budget skips direct successors entirely") {
        auto g = TransitionGraph::from_edges(5, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 4, 1}});
        auto emb = test::make_embeddings({{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}});
        std::vector<std::size_t> budgets{0, 2};
        auto got = retrieve_for_anchor(g, emb, 0, budgets, 0.5, true);
        REQUIRE(got.size() == 2);
        for (const auto& c : got) CHECK(c.hop == 2);
    }
    SUBCASE("per-hop budget bound holds on random graphs") {
        std::mt19937_64 rng(29);
        for (int trial = 0; trial < 20; ++trial) {
            auto g = test::random_graph(30, 150, rng);
            auto emb = test::random_embeddings(30, 4, rng);
            std::vector<std::size_t> budgets{3, 2, 1};
            auto got = retrieve_for_anchor(g, emb, static_cast<ItemIndex>(trial % 30), budgets,
                                           0.5, true);
            std::size_t per_hop[4] = {0, 0, 0, 0};
            for (const auto& c : got) {
                REQUIRE(c.hop >= 1);
                REQUIRE(c.hop <= 3);
                ++per_hop[c.hop];
            }
            CHECK(per_hop[1] <= 3);
            CHECK(per_hop[2] <= 2);
            CHECK(per_hop[3] <= 1);
        }
    }
}

TEST_CASE("tgh_recommend") {
    SUBCASE("anchor itself is excluded even with a self-loop") {
        auto g = TransitionGraph::from_edges(3, {{0, 0, 5}, {0, 1, 1}});
        auto emb = test::make_embeddings({{1, 0}, {1, 0}, {0, 1}});
        std::vector<ItemIndex> ctx{0};
        auto rec = tgh_recommend(TghConfig::tgh1(), g, emb, ctx);
        for (const auto& s : rec) CHECK(s.item != 0);
        REQUIRE(rec.size() == 1);
        CHECK(rec[0].item == 1);
    }
    SUBCASE("duplicate candidates keep the maximum score across anchors") {
        // Item 4 is a hop-1 successor of both context items 2 (last) and 1
        // (second-last). Cosines differ, so the two anchor scores differ.
        auto g = TransitionGraph::from_edges(5, {{2, 4, 1}, {1, 4, 1}});
        auto emb = test::make_embeddings(
            {{1, 0}, {0.6f, 0.8f}, {1, 0}, {0, 1}, {1, 0}});
        TghConfig cfg = TghConfig::tgh2();
        std::vector<ItemIndex> ctx{1, 2};
        auto rec = tgh_recommend(cfg, g, emb, ctx);
        REQUIRE(rec.size() == 1);
        CHECK(rec[0].item == 4);
        // From anchor 2: cos=1, w=1 -> 1.5. From anchor 1: cos=0.6 + 0.5 -> 1.1.
        CHECK(rec[0].score == doctest::Approx(1.5).epsilon(1e-6));
    }
    SUBCASE("list is truncated to list_size and sorted") {
        std::mt19937_64 rng(31);
        std::vector<std::tuple<ItemIndex, ItemIndex, std::uint32_t>> edges;
        for (ItemIndex j = 1; j < 30; ++j) edges.emplace_back(0, j, 1 + j % 5);
        auto g = TransitionGraph::from_edges(30, edges);
        auto emb = test::random_embeddings(30, 8, rng);
        TghConfig cfg = TghConfig::tgh1();
        cfg.anchors[0].hop_budgets = {20};
        std::vector<ItemIndex> ctx{0};
        auto rec = tgh_recommend(cfg, g, emb, ctx);
        REQUIRE(rec.size() == 10);
        for (std::size_t i = 1; i < rec.size(); ++i) {
            bool ordered = rec[i - 1].score > rec[i].score ||
                           (rec[i - 1].score == rec[i].score && rec[i - 1].item < rec[i].item);
            CHECK(ordered);
        }
    }
    SUBCASE("length-1 context under multi-anchor preset uses only offset 0") {
        std::mt19937_64 rng(37);
        auto g = test::random_graph(25, 120, rng);
        auto emb = test::random_embeddings(25, 6, rng);
        std::vector<ItemIndex> ctx{7};
        auto full = tgh_recommend(TghConfig::tgh2(), g, emb, ctx);
        TghConfig first_only = TghConfig::tgh2();
        first_only.anchors.resize(1);
        auto only0 = tgh_recommend(first_only, g, emb, ctx);
        REQUIRE(full.size() == only0.size());
        for (std::size_t i = 0; i < full.size(); ++i) {
            CHECK(full[i].item == only0[i].item);
            CHECK(full[i].score == only0[i].score);
        }
    }
    SUBCASE("alpha = 0 reduces scores to pure cosine") {
        std::mt19937_64 rng(41);
        auto g = test::random_graph(20, 80, rng);
        auto emb = test::random_embeddings(20, 5, rng);
        TghConfig cfg = TghConfig::tgh1();
        cfg.alpha = 0.0;
        std::vector<ItemIndex> ctx{3};
        for (const auto& s : tgh_recommend(cfg, g, emb, ctx))
            CHECK(s.score == doctest::Approx(cosine(emb, 3, s.item)).epsilon(1e-9));
    }
    SUBCASE("exclude_history removes context items") {
        auto g = TransitionGraph::from_edges(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
        auto emb = test::make_embeddings({{1, 0}, {1, 0}, {1, 0}, {1, 0}});
        TghConfig cfg = TghConfig::tgh1();
        cfg.exclude_history = true;
        std::vector<ItemIndex> ctx{1, 0};
        auto rec = tgh_recommend(cfg, g, emb, ctx);
        for (const auto& s : rec) {
            CHECK(s.item != 0);
            CHECK(s.item != 1);
        }
        REQUIRE(rec.size() == 2);
    }
    SUBCASE("deterministic across repeated calls") {
        std::mt19937_64 rng(43);
        auto g = test::random_graph(40, 200, rng);
        auto emb = test::random_embeddings(40, 6, rng);
        std::vector<ItemIndex> ctx{5, 11, 3};
        auto a = tgh_recommend(TghConfig::tgh2(), g, emb, ctx);
        auto b = tgh_recommend(TghConfig::tgh2(), g, emb, ctx);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].item == b[i].item);
            CHECK(a[i].score == b[i].score);
        }
    }
}
