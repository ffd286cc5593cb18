#include <doctest.h>

#include <cmath>
#include <cstring>

#include "seqrec/embeddings.hpp"
#include "test_util.hpp"

using namespace seqrec;
using test::TempDir;
using test::write_file;

static ItemVocab vocab_of(const std::vector<std::string>& ids) {
    ItemVocab v;
    v.index_to_id = ids;
    for (ItemIndex i = 0; i < ids.size(); ++i) v.id_to_index[ids[i]] = i;
    return v;
}

TEST_CASE("text embeddings load row-aligned to the vocabulary") {
    TempDir tmp("emb");
    write_file(tmp.path("e.txt"), "itemB 1 0\nitemA 0.6 0.8\n");
    auto vocab = vocab_of({"itemA", "itemB"});
    auto emb = load_embeddings_text(tmp.path("e.txt"), vocab);
    REQUIRE(emb.dim == 2);
    CHECK(emb.row(0)[0] == doctest::Approx(0.6));
    CHECK(emb.row(0)[1] == doctest::Approx(0.8));
    CHECK(emb.row(1)[0] == doctest::Approx(1.0));
}

TEST_CASE("missing vocabulary item aborts, naming the item") {
    TempDir tmp("emb");
    write_file(tmp.path("e.txt"), "itemA 1 0\n");
    auto vocab = vocab_of({"itemA", "itemB"});
    CHECK_THROWS_WITH_AS(load_embeddings_text(tmp.path("e.txt"), vocab),
                         doctest::Contains("itemB"), DataError);

    SUBCASE("allow_missing substitutes a flagged zero row") {
        EmbeddingLoadOptions opts;
        opts.allow_missing = true;
        EmbeddingLoadReport report;
        auto emb = load_embeddings_text(tmp.path("e.txt"), vocab, opts, &report);
        CHECK(report.missing_items == 1);
        CHECK(emb.row(1)[0] == 0.0f);
        CHECK(emb.zero_row[1] == 1);
    }
}

TEST_CASE("extra file items are ignored and counted") {
    TempDir tmp("emb");
    write_file(tmp.path("e.txt"), "itemA 1 0\nstray 0 1\n");
    auto vocab = vocab_of({"itemA"});
    EmbeddingLoadReport report;
    auto emb = load_embeddings_text(tmp.path("e.txt"), vocab, {}, &report);
    CHECK(report.ignored_items == 1);
    CHECK(emb.num_rows == 1);
}

TEST_CASE("dimension mismatch across rows is rejected") {
    TempDir tmp("emb");
    write_file(tmp.path("e.txt"), "a 1 0\nb 1 0 0\n");
    CHECK_THROWS_AS(load_embeddings_raw(tmp.path("e.txt")), DataError);
}

TEST_CASE("binary round-trip is bit-identical") {
    TempDir tmp("emb");
    auto vocab = vocab_of({"a", "b", "c"});
    auto emb = test::make_embeddings({{0.25f, -1.5f}, {3.0f, 4.0f}, {1e-7f, 2e9f}});
    save_embeddings_binary(tmp.path("e.bin"), emb, vocab);
    auto loaded = load_embeddings_binary(tmp.path("e.bin"), vocab);
    CHECK(loaded.dim == emb.dim);
    REQUIRE(loaded.data.size() == emb.data.size());
    for (std::size_t i = 0; i < emb.data.size(); ++i)
        CHECK(std::memcmp(&loaded.data[i], &emb.data[i], sizeof(float)) == 0);

    SUBCASE("byte-level round trip through raw io") {
        auto raw = load_embeddings_raw(tmp.path("e.bin"));
        save_embeddings_raw(tmp.path("e2.bin"), raw, true);
        CHECK(test::read_file(tmp.path("e.bin")) == test::read_file(tmp.path("e2.bin")));
    }
}

TEST_CASE("binary header layout is as documented") {
    TempDir tmp("emb");
    auto vocab = vocab_of({"ab"});
    EmbeddingMatrix emb;
    emb.dim = 1;
    emb.num_rows = 1;
    emb.data = {1.0f};
    emb.zero_row = {0};
    save_embeddings_binary(tmp.path("e.bin"), emb, vocab);
    auto bytes = test::read_file(tmp.path("e.bin"));
    // magic + version + u32 dim + u64 count + u16 idlen + id + f32
    REQUIRE(bytes.size() == 4 + 1 + 4 + 8 + 2 + 2 + 4);
    CHECK(bytes.substr(0, 4) == "SRAE");
    CHECK(bytes[4] == 0x01);
    CHECK(static_cast<unsigned char>(bytes[5]) == 1); // dim, little-endian
    CHECK(static_cast<unsigned char>(bytes[9]) == 1); // count
    CHECK(bytes.substr(17 + 2, 2) == "ab");
}

TEST_CASE("normalize_rows") {
    SUBCASE("3-4-5 triangle") {
        auto emb = test::make_embeddings({{3.0f, 4.0f}});
        CHECK(emb.row(0)[0] == doctest::Approx(0.6));
        CHECK(emb.row(0)[1] == doctest::Approx(0.8));
        CHECK(emb.normalized);
    }
    SUBCASE("idempotent within 1e-7") {
        auto emb = test::make_embeddings({{0.1f, -2.0f, 0.7f}});
        auto before = emb.data;
        normalize_rows(emb);
        for (std::size_t i = 0; i < before.size(); ++i)
            CHECK(emb.data[i] == doctest::Approx(before[i]).epsilon(1e-7));
    }
    SUBCASE("zero rows pass through flagged") {
        EmbeddingMatrix emb;
        emb.dim = 2;
        emb.num_rows = 2;
        emb.data = {0.0f, 0.0f, 1.0f, 1.0f};
        normalize_rows(emb);
        CHECK(emb.zero_row[0] == 1);
        CHECK(emb.zero_row[1] == 0);
        CHECK(emb.row(0)[0] == 0.0f);
    }
    SUBCASE("all nonzero rows end up unit length") {
        std::mt19937_64 rng(3);
        auto emb = test::random_embeddings(50, 8, rng);
        for (ItemIndex i = 0; i < emb.num_rows; ++i) {
            double norm = 0;
            for (float v : emb.row(i)) norm += static_cast<double>(v) * v;
            CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-4);
        }
    }
}
