#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "saoe/evaluation.hpp"

using namespace saoe;

namespace {

Tube tube_of(const std::string& video_id, std::vector<std::pair<int, Box>> boxes) {
    Tube t;
    t.video_id = video_id;
    for (const auto& [frame, box] : boxes) t.elements.push_back({frame, box, 1.0});
    t.embedding_score = 1.0;
    return t;
}

GroundTruthTube gt_of(const std::string& video_id, const std::string& action,
                      std::vector<std::pair<int, Box>> boxes) {
    GroundTruthTube gt;
    gt.video_id = video_id;
    gt.action = action;
    gt.boxes = std::move(boxes);
    return gt;
}

RankedTube ranked_of(const Tube& tube, double score) {
    RankedTube rt;
    rt.tube = tube;
    rt.combined_score = score;
    return rt;
}

// Independent AUC oracle: evaluate the curve point at every distinct score
// threshold from scratch, then integrate. Matching replicates the pinned
// greedy protocol down the ranking.
double auc_oracle(const std::vector<RankedTube>& ranked,
                  const std::vector<GroundTruthTube>& gts, double threshold) {
    std::vector<bool> hit(ranked.size(), false);
    std::vector<bool> used(gts.size(), false);
    for (std::size_t i = 0; i < ranked.size(); ++i)
        for (std::size_t g = 0; g < gts.size(); ++g)
            if (!used[g] && gts[g].video_id == ranked[i].tube.video_id &&
                st_iou(ranked[i].tube, gts[g]) >= threshold) {
                used[g] = true;
                hit[i] = true;
                break;
            }
    std::set<double, std::greater<double>> scores;
    for (const auto& rt : ranked) scores.insert(rt.combined_score);
    const double denom = std::max(1.0, static_cast<double>(ranked.size()) -
                                           static_cast<double>(gts.size()));
    std::vector<std::pair<double, double>> curve{{0.0, 0.0}};
    for (double s : scores) {
        std::size_t tp = 0, fp = 0;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            if (ranked[i].combined_score < s) continue;
            if (hit[i]) ++tp;
            else ++fp;
        }
        curve.emplace_back(std::min(1.0, static_cast<double>(fp) / denom),
                           static_cast<double>(tp) / static_cast<double>(gts.size()));
    }
    curve.emplace_back(1.0, curve.back().second);
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        area += (curve[i].first - curve[i - 1].first) * 0.5 *
                (curve[i].second + curve[i - 1].second);
    return area;
}

}  // namespace

TEST_CASE("st_iou examples") {
    const auto t1 = tube_of("v", {{0, {0, 0, 10, 10}}, {1, {0, 0, 10, 10}}});
    const auto g1 = gt_of("v", "a", {{0, {0, 0, 10, 10}}, {1, {0, 0, 10, 10}}});
    CHECK(st_iou(t1, g1) == doctest::Approx(1.0));

    const auto t2 = tube_of("v", {{5, {0, 0, 10, 10}}});
    CHECK(st_iou(t2, g1) == 0.0);  // temporally disjoint

    // Pred covers exactly half of gt's frames with IoU 1, no extra frames.
    const auto t3 = tube_of("v", {{0, {0, 0, 10, 10}}});
    CHECK(st_iou(t3, g1) == doctest::Approx(0.5));

    CHECK_THROWS_AS(st_iou(tube_of("other", {{0, {0, 0, 1, 1}}}), g1), InputError);
}

TEST_CASE("st_iou symmetry and translation invariance") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<int, Box>> a_boxes, b_boxes;
        for (int f = 0; f < 4; ++f) {
            const double x = u(rng), y = u(rng);
            a_boxes.push_back({f, {x, y, x + 8, y + 8}});
            const double x2 = u(rng), y2 = u(rng);
            b_boxes.push_back({f + (trial % 2), {x2, y2, x2 + 8, y2 + 8}});
        }
        const auto pred = tube_of("v", a_boxes);
        const auto gt = gt_of("v", "a", b_boxes);
        // Symmetry: swap roles.
        const auto pred_swapped = tube_of("v", b_boxes);
        auto gt_swapped = gt_of("v", "a", a_boxes);
        CHECK(st_iou(pred, gt) == doctest::Approx(st_iou(pred_swapped, gt_swapped)));
        // Joint translation.
        std::vector<std::pair<int, Box>> a_shift, b_shift;
        for (auto [f, b] : a_boxes) a_shift.push_back({f, {b.x1 + 7, b.y1 - 3, b.x2 + 7, b.y2 - 3}});
        for (auto [f, b] : b_boxes) b_shift.push_back({f, {b.x1 + 7, b.y1 - 3, b.x2 + 7, b.y2 - 3}});
        CHECK(st_iou(tube_of("v", a_shift), gt_of("v", "a", b_shift)) ==
              doctest::Approx(st_iou(pred, gt)).epsilon(1e-12));
    }
}

TEST_CASE("average_precision examples") {
    const Box box{0, 0, 10, 10};
    const auto gt1 = gt_of("v1", "a", {{0, box}});
    const auto match = tube_of("v1", {{0, box}});
    const auto miss = tube_of("v1", {{0, {100, 100, 110, 110}}});

    // Single gt matched at rank 1.
    CHECK(average_precision({ranked_of(match, 2.0)}, {gt1}, 0.5) == doctest::Approx(1.0));
    // Single gt matched at rank 2 of 2.
    CHECK(average_precision({ranked_of(miss, 2.0), ranked_of(match, 1.0)}, {gt1}, 0.5) ==
          doctest::Approx(0.5));
    // Two gts, matched at ranks 1 and 3.
    const auto gt2 = gt_of("v2", "a", {{0, box}});
    const auto match2 = tube_of("v2", {{0, box}});
    const double ap = average_precision(
        {ranked_of(match, 3.0), ranked_of(miss, 2.0), ranked_of(match2, 1.0)}, {gt1, gt2},
        0.5);
    CHECK(ap == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0));

    CHECK_THROWS_AS(average_precision({}, {}, 0.5), InputError);
}

TEST_CASE("average_precision: rank-only dependence and duplication property") {
    const Box box{0, 0, 10, 10};
    const auto gt1 = gt_of("v1", "a", {{0, box}});
    const auto match = tube_of("v1", {{0, box}});
    const auto miss = tube_of("v1", {{0, {100, 100, 110, 110}}});
    std::vector<RankedTube> ranked = {ranked_of(miss, 9.0), ranked_of(match, 5.0)};
    const double base = average_precision(ranked, {gt1}, 0.5);
    // Strictly monotone score transform preserves AP.
    std::vector<RankedTube> transformed = ranked;
    for (auto& rt : transformed) rt.combined_score = rt.combined_score * 10 + 3;
    CHECK(average_precision(transformed, {gt1}, 0.5) == doctest::Approx(base));
    // Duplicating a ranked tube below its original never raises AP.
    std::vector<RankedTube> dup = ranked;
    dup.push_back(ranked_of(match, 1.0));
    CHECK(average_precision(dup, {gt1}, 0.5) <= base + 1e-12);
}

TEST_CASE("auc: trivial cases") {
    const Box box{0, 0, 10, 10};
    const auto gt1 = gt_of("v1", "a", {{0, box}});
    const auto gt2 = gt_of("v2", "a", {{0, box}});
    const auto m1 = tube_of("v1", {{0, box}});
    const auto m2 = tube_of("v2", {{0, box}});

    // All tubes are true positives covering all gts.
    CHECK(auc({ranked_of(m1, 2.0), ranked_of(m2, 1.0)}, {gt1, gt2}, 0.5) ==
          doctest::Approx(1.0));
    // No tube matches any gt.
    const auto miss = tube_of("v1", {{0, {90, 90, 95, 95}}});
    CHECK(auc({ranked_of(miss, 1.0)}, {gt1, gt2}, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("auc: mixed case equals the exhaustive sweep oracle") {
    const Box box{0, 0, 10, 10};
    const auto gt1 = gt_of("v1", "a", {{0, box}});
    const auto gt2 = gt_of("v2", "a", {{0, box}});
    std::vector<RankedTube> ranked = {
        ranked_of(tube_of("v1", {{0, box}}), 4.0),
        ranked_of(tube_of("v1", {{0, {90, 90, 95, 95}}}), 3.0),
        ranked_of(tube_of("v2", {{0, {90, 90, 95, 95}}}), 2.0),
        ranked_of(tube_of("v2", {{0, box}}), 1.0),
    };
    CHECK(auc(ranked, {gt1, gt2}, 0.5) ==
          doctest::Approx(auc_oracle(ranked, {gt1, gt2}, 0.5)).epsilon(1e-12));

    // Randomized agreement with the oracle, including tied scores.
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> score_bucket(0, 3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RankedTube> tubes;
        std::vector<GroundTruthTube> gts;
        for (int v = 0; v < 3; ++v) {
            const std::string vid = "v" + std::to_string(v);
            gts.push_back(gt_of(vid, "a", {{0, box}}));
            const int n = 1 + score_bucket(rng);
            for (int i = 0; i < n; ++i) {
                const bool good = u(rng) < 0.5;
                tubes.push_back(ranked_of(
                    tube_of(vid, {{0, good ? box : Box{50, 50, 55, 55}}}),
                    static_cast<double>(score_bucket(rng))));
            }
        }
        std::sort(tubes.begin(), tubes.end(), [](const RankedTube& a, const RankedTube& b) {
            return a.combined_score > b.combined_score;
        });
        CHECK(auc(tubes, gts, 0.5) ==
              doctest::Approx(auc_oracle(tubes, gts, 0.5)).epsilon(1e-12));
    }
}

TEST_CASE("accuracy: class-mean semantics") {
    std::map<std::string, std::string> labels = {
        {"v1", "a"}, {"v2", "a"}, {"v3", "a"}, {"v4", "b"}};
    std::map<std::string, std::string> predictions = {
        {"v1", "a"}, {"v2", "a"}, {"v3", "a"}, {"v4", "a"}};
    // Class a: 100%, class b: 0% -> 0.5 regardless of class sizes.
    CHECK(accuracy(predictions, labels) == doctest::Approx(0.5));
    predictions["v4"] = "b";
    CHECK(accuracy(predictions, labels) == doctest::Approx(1.0));
    predictions.erase("v4");
    CHECK_THROWS_AS(accuracy(predictions, labels), InputError);
}

TEST_CASE("accuracy: random predictions over 10 balanced classes are ~0.1") {
    // Table-style sanity: random guessing over 10 classes gives 0.100.
    std::vector<std::string> classes;
    for (int c = 0; c < 10; ++c) classes.push_back("c" + std::to_string(c));
    double mean = 0.0;
    for (int seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed) + 100);
        std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
        std::map<std::string, std::string> labels, predictions;
        int id = 0;
        for (const auto& cls : classes)
            for (int i = 0; i < 200; ++i, ++id) {
                const std::string vid = "v" + std::to_string(id);
                labels[vid] = cls;
                predictions[vid] = classes[pick(rng)];
            }
        mean += accuracy(predictions, labels) / 10.0;
    }
    CHECK(mean == doctest::Approx(0.1).epsilon(0.2));  // 0.1 +- 0.02
}
