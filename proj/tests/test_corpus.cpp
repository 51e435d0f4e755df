#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "saoe/corpus.hpp"

using namespace saoe;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(std::string p, const std::string& content) : path(std::move(p)) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("load_video_detections: minimal well-formed input") {
    TempFile f("test_det_tmp.json", R"({
        "video_id": "v1",
        "frames": [{"index": 0, "actors": [{"box": [0,0,10,10], "score": 0.9}]}]
    })");
    const auto video = load_video_detections(f.path);
    CHECK(video.video_id == "v1");
    REQUIRE(video.frames.size() == 1);
    CHECK(video.frames[0].actors.size() == 1);
    CHECK(video.frames[0].objects.empty());
    CHECK(video.frames[0].actors[0].score == 0.9);
}

TEST_CASE("load_video_detections: score outside [0,1] rejected") {
    TempFile f("test_det_tmp.json", R"({
        "video_id": "v1",
        "frames": [{"index": 0, "actors": [{"box": [0,0,10,10], "score": 1.7}]}]
    })");
    CHECK_THROWS_AS(load_video_detections(f.path), InputError);
}

TEST_CASE("load_video_detections: out-of-order frames are sorted") {
    TempFile f("test_det_tmp.json", R"({
        "video_id": "v1",
        "frames": [
            {"index": 3, "actors": [{"box": [0,0,1,1], "score": 0.5}]},
            {"index": 1, "actors": [{"box": [0,0,1,1], "score": 0.5}]}
        ]
    })");
    const auto video = load_video_detections(f.path);
    REQUIRE(video.frames.size() == 2);
    CHECK(video.frames[0].frame_index == 1);
    CHECK(video.frames[1].frame_index == 3);
}

TEST_CASE("load_video_detections: duplicate frame index rejected") {
    TempFile f("test_det_tmp.json", R"({
        "video_id": "v1",
        "frames": [
            {"index": 1, "actors": []},
            {"index": 1, "actors": []}
        ]
    })");
    CHECK_THROWS_AS(load_video_detections(f.path), InputError);
}

TEST_CASE("load_video_detections: parse failure reports the file") {
    TempFile f("test_det_tmp.json", "{ not json");
    try {
        load_video_detections(f.path);
        FAIL("expected parse error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("test_det_tmp.json") != std::string::npos);
    }
}

TEST_CASE("detections round trip is field-for-field identical") {
    VideoDetections video;
    video.video_id = "rt";
    FrameDetections frame;
    frame.frame_index = 2;
    frame.actors.push_back({{0.5, 1.25, 10.75, 20.125}, kActorLabel, 0.875});
    frame.objects.push_back({{3, 4, 5, 6}, "horse", 0.25});
    video.frames.push_back(frame);
    FrameDetections empty;
    empty.frame_index = 3;  // missing-object frames are legal
    video.frames.push_back(empty);

    save_video_detections(video, "test_rt_tmp.json");
    const auto loaded = load_video_detections("test_rt_tmp.json");
    REQUIRE(loaded.frames.size() == 2);
    CHECK(loaded.video_id == video.video_id);
    CHECK(loaded.frames[0].actors[0].box == video.frames[0].actors[0].box);
    CHECK(loaded.frames[0].actors[0].score == video.frames[0].actors[0].score);
    CHECK(loaded.frames[0].objects[0].label == "horse");
    CHECK(loaded.frames[0].objects[0].box == video.frames[0].objects[0].box);
    CHECK(loaded.frames[1].actors.empty());

    // Writing the reloaded structure reproduces identical bytes.
    save_video_detections(loaded, "test_rt2_tmp.json");
    CHECK(slurp("test_rt_tmp.json") == slurp("test_rt2_tmp.json"));
    std::remove("test_rt_tmp.json");
    std::remove("test_rt2_tmp.json");
}

TEST_CASE("global scores and ground truth round trips") {
    GlobalScores globals;
    globals["v1"]["horse"] = 0.75;
    globals["v1"]["dog"] = 0.0;
    globals["v2"]["horse"] = 1.0;
    save_global_scores(globals, "test_gs_tmp.json");
    CHECK(load_global_scores("test_gs_tmp.json") == globals);
    std::remove("test_gs_tmp.json");

    std::vector<GroundTruthTube> gts;
    GroundTruthTube gt;
    gt.video_id = "v1";
    gt.action = "riding";
    gt.boxes = {{0, {0, 0, 5, 5}}, {1, {1, 1, 6, 6}}};
    gts.push_back(gt);
    save_ground_truth(gts, "test_gt_tmp.json");
    const auto loaded = load_ground_truth("test_gt_tmp.json");
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].action == "riding");
    CHECK(loaded[0].boxes == gts[0].boxes);
    std::remove("test_gt_tmp.json");
}

TEST_CASE("global scores outside [0,1] rejected") {
    TempFile f("test_gs_bad_tmp.json", R"({"v1": {"horse": 1.5}})");
    CHECK_THROWS_AS(load_global_scores(f.path), InputError);
}
