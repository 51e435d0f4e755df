#include <doctest.h>

#include <algorithm>

#include "saoe/video_scoring.hpp"

using namespace saoe;

namespace {

Tube make_tube(const std::string& video_id, const std::string& action, double score) {
    Tube t;
    t.video_id = video_id;
    t.action = action;
    t.elements.push_back({0, {0, 0, 5, 5}, score});
    t.embedding_score = score;
    return t;
}

RelevanceList relevance_of(std::vector<RelevanceEntry> entries) {
    RelevanceList list;
    list.entries = std::move(entries);
    return list;
}

}  // namespace

TEST_CASE("global_score examples") {
    GlobalScores globals;
    globals["v1"]["horse"] = 0.7;
    globals["v1"]["dog"] = 0.2;
    globals["v1"]["cat"] = 0.5;

    CHECK(global_score("v1", globals, relevance_of({{"horse", 1.0}})) == doctest::Approx(0.7));
    CHECK(global_score("v1", globals, relevance_of({{"unicorn", 1.0}})) == 0.0);
    CHECK(global_score("v1", globals, relevance_of({{"cat", 0.8}, {"dog", 0.5}})) ==
          doctest::Approx(0.5));
    CHECK_THROWS_AS(global_score("nope", globals, relevance_of({})), InputError);
}

TEST_CASE("rank_localizations: Eq-7 dominance and within-video invariance") {
    GlobalScores globals;
    globals["v1"]["horse"] = 0.9;
    globals["v2"]["horse"] = 0.1;
    const auto relevance = relevance_of({{"horse", 1.0}});

    std::vector<Tube> tubes = {make_tube("v1", "a", 1.0), make_tube("v2", "a", 1.0)};
    auto ranked = rank_localizations(tubes, globals, relevance, 1);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].tube.video_id == "v1");
    CHECK(ranked[0].combined_score == doctest::Approx(1.9));

    // Within one video, order under Eq. 7 equals order under t_emb alone.
    std::vector<Tube> multi = {make_tube("v1", "a", 0.5), make_tube("v1", "a", 2.0),
                               make_tube("v1", "a", 1.0)};
    auto all = rank_localizations(multi, globals, relevance, 3);
    REQUIRE(all.size() == 3);
    CHECK(all[0].tube.embedding_score == 2.0);
    CHECK(all[1].tube.embedding_score == 1.0);
    CHECK(all[2].tube.embedding_score == 0.5);

    // top_per_video keeps the best tube only.
    auto top1 = rank_localizations(multi, globals, relevance, 1);
    REQUIRE(top1.size() == 1);
    CHECK(top1[0].tube.embedding_score == 2.0);

    // Zeroed globals reduce ordering to pure t_emb.
    GlobalScores zero;
    zero["v1"] = {};
    zero["v2"] = {};
    auto pure = rank_localizations(tubes, zero, relevance, 1);
    CHECK(pure[0].combined_score == doctest::Approx(pure[0].tube.embedding_score));
}

TEST_CASE("classify: direct Eq-8, empty tubes, and invariances") {
    GlobalScores globals;
    globals["v"]["horse"] = 0.3;
    globals["v"]["dog"] = 0.2;
    std::map<std::string, RelevanceList> relevances;
    relevances["A"] = relevance_of({{"horse", 1.0}});
    relevances["B"] = relevance_of({{"dog", 1.0}});

    std::map<std::string, std::vector<Tube>> tubes;
    tubes["A"] = {make_tube("v", "A", 1.2), make_tube("v", "A", 0.4)};
    tubes["B"] = {make_tube("v", "B", 0.9)};
    auto result = classify("v", tubes, globals, relevances);
    CHECK(result.predicted == "A");
    CHECK(result.scores["A"] == doctest::Approx(1.5));
    CHECK(result.scores["B"] == doctest::Approx(1.1));

    // Duplicating a non-maximal tube changes nothing.
    tubes["A"].push_back(make_tube("v", "A", 0.4));
    CHECK(classify("v", tubes, globals, relevances).scores["A"] == doctest::Approx(1.5));
    // Tube order does not matter.
    std::reverse(tubes["A"].begin(), tubes["A"].end());
    CHECK(classify("v", tubes, globals, relevances).predicted == "A");

    // Zero tubes: the decision reduces to argmax of the global term.
    std::map<std::string, std::vector<Tube>> empty;
    empty["A"] = {};
    empty["B"] = {};
    CHECK(classify("v", empty, globals, relevances).predicted == "A");

    // Single action set predicts that action.
    std::map<std::string, std::vector<Tube>> solo;
    solo["B"] = {};
    CHECK(classify("v", solo, globals, relevances).predicted == "B");

    CHECK_THROWS_AS(classify("v", {}, globals, relevances), InputError);
}

TEST_CASE("classify: ties broken lexicographically") {
    GlobalScores globals;
    globals["v"] = {};
    std::map<std::string, RelevanceList> relevances;
    relevances["zeta"] = relevance_of({});
    relevances["alpha"] = relevance_of({});
    std::map<std::string, std::vector<Tube>> tubes;
    tubes["zeta"] = {make_tube("v", "zeta", 1.0)};
    tubes["alpha"] = {make_tube("v", "alpha", 1.0)};
    CHECK(classify("v", tubes, globals, relevances).predicted == "alpha");
}

TEST_CASE("ranked tube save/load round trip") {
    std::vector<RankedTube> tubes;
    RankedTube rt;
    rt.tube = make_tube("v1", "act", 1.25);
    rt.combined_score = 2.5;
    tubes.push_back(rt);
    save_ranked_tubes(tubes, "test_tubes_tmp.json");
    const auto loaded = load_ranked_tubes("test_tubes_tmp.json");
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].tube.video_id == "v1");
    CHECK(loaded[0].combined_score == 2.5);
    CHECK(loaded[0].tube.embedding_score == doctest::Approx(1.25));
    std::remove("test_tubes_tmp.json");
}
