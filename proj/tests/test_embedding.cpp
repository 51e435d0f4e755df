#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "saoe/corpus.hpp"
#include "saoe/embedding.hpp"

using namespace saoe;

namespace {

EmbeddingStore small_store() {
    EmbeddingStore store;
    store.dimension = 2;
    store.vectors["horse"] = {1, 0};
    store.vectors["riding"] = {1, 0};
    store.vectors["dog"] = {0, 1};
    store.vectors["cat"] = {1, 1};
    return store;
}

}  // namespace

TEST_CASE("load_embeddings parses labels and vectors") {
    const std::string path = "test_emb_tmp.txt";
    {
        std::ofstream out(path);
        out << "horse 1 0\ndog 0 1\n";
    }
    const auto store = load_embeddings(path);
    CHECK(store.dimension == 2);
    CHECK(store.vectors.size() == 2);
    CHECK(store.vectors.at("horse") == std::vector<double>{1, 0});

    {
        std::ofstream out(path);
        out << "horse 1 0\ndog 0 1 2\n";  // inconsistent dimension
    }
    CHECK_THROWS_AS(load_embeddings(path), InputError);
    {
        std::ofstream out(path);
        out << "horse 1 0\nhorse 0 1\n";  // duplicate label
    }
    CHECK_THROWS_AS(load_embeddings(path), InputError);
    {
        std::ofstream out(path);
        out << "horse 1 zebra\n";  // non-numeric component
    }
    CHECK_THROWS_AS(load_embeddings(path), InputError);
    std::remove(path.c_str());
}

TEST_CASE("embed_phrase averages tokens, splits on whitespace and underscores") {
    const auto store = small_store();
    CHECK(embed_phrase("horse", store) == std::vector<double>{1, 0});
    const auto mean = embed_phrase("riding dog", store);
    CHECK(mean[0] == doctest::Approx(0.5));
    CHECK(mean[1] == doctest::Approx(0.5));
    CHECK(embed_phrase("Riding_Dog", store) == mean);
    try {
        embed_phrase("riding unicorn", store);
        FAIL("expected OOV error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("unicorn") != std::string::npos);
    }
}

TEST_CASE("similarity values") {
    const auto store = small_store();
    CHECK(similarity("horse", "horse", store) == doctest::Approx(1.0));
    CHECK(similarity("horse", "dog", store) == doctest::Approx(0.0));
    CHECK(similarity("cat", "horse", store) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(similarity("horse", "cat", store) == similarity("cat", "horse", store));
}

TEST_CASE("similarity is invariant under positive scaling") {
    auto store = small_store();
    const double base = similarity("cat", "horse", store);
    store.vectors["cat"] = {42, 42};
    CHECK(similarity("cat", "horse", store) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("similarity rejects zero-norm vectors") {
    auto store = small_store();
    store.vectors["nil"] = {0, 0};
    CHECK_THROWS_AS(similarity("nil", "horse", store), InputError);
}

TEST_CASE("select_top_objects ordering, ties, and prefix property") {
    EmbeddingStore store;
    store.dimension = 2;
    store.vectors["act"] = {1, 0};
    store.vectors["a"] = {1, 1};
    store.vectors["b"] = {1, 1};   // tied with a
    store.vectors["c"] = {1, 0};   // exact match
    store.vectors["d"] = {0, 1};   // orthogonal
    const std::vector<std::string> candidates = {"d", "b", "a", "c"};

    const auto all = select_top_objects("act", candidates, store, candidates.size());
    REQUIRE(all.entries.size() == 4);
    CHECK(all.entries[0].label == "c");
    CHECK(all.entries[1].label == "a");  // lexicographic tie-break with b
    CHECK(all.entries[2].label == "b");
    CHECK(all.entries[3].label == "d");

    for (std::size_t k = 1; k < candidates.size(); ++k) {
        const auto top = select_top_objects("act", candidates, store, k);
        REQUIRE(top.entries.size() == k);
        for (std::size_t i = 0; i < k; ++i)
            CHECK(top.entries[i].label == all.entries[i].label);  // prefix of full order
    }

    CHECK(select_top_objects("a", {"a", "b"}, store, 1).entries[0].weight ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(select_top_objects("act", candidates, store, 5), InputError);
}
