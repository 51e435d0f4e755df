#pragma once

#include <map>
#include <string>
#include <vector>

#include "saoe/geometry.hpp"

namespace saoe {

// Thrown for malformed or contract-violating input files. The CLI maps this
// to a distinct exit code from internal failures.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kActorLabel = "actor";

struct Detection {
    Box box;
    std::string label;
    double score = 0.0;  // detector probability in [0,1]
};

struct FrameDetections {
    int frame_index = 0;
    std::vector<Detection> actors;
    std::vector<Detection> objects;
};

struct VideoDetections {
    std::string video_id;
    std::vector<FrameDetections> frames;  // strictly increasing frame_index
};

struct GroundTruthTube {
    std::string video_id;
    std::string action;
    std::vector<std::pair<int, Box>> boxes;  // strictly increasing frame index
};

// video_id -> (object label -> probability)
using GlobalScores = std::map<std::string, std::map<std::string, double>>;

VideoDetections load_video_detections(const std::string& path);
void save_video_detections(const VideoDetections& video, const std::string& path);

// One video file per *.json in the directory, sorted by filename.
std::vector<VideoDetections> load_detections_dir(const std::string& dir);

GlobalScores load_global_scores(const std::string& path);
void save_global_scores(const GlobalScores& globals, const std::string& path);

std::vector<GroundTruthTube> load_ground_truth(const std::string& path);
void save_ground_truth(const std::vector<GroundTruthTube>& gts, const std::string& path);

}  // namespace saoe
