#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "saoe/corpus.hpp"
#include "saoe/embedding.hpp"
#include "saoe/relations.hpp"

namespace saoe {

struct ActionSpec {
    std::string name;
    std::string object_label;
    std::string relation_cell;  // named cell, e.g. "above", "right", "on"
    double relative_size = 0.25;  // object area / actor area
};

struct NoiseSpec {
    double jitter_sigma = 0.0;       // gaussian pixel noise on detection coords
    double false_positive_rate = 0.0;  // per frame, per kind
    double miss_rate = 0.0;            // per detection
};

struct SceneSpec {
    std::vector<ActionSpec> actions;
    int videos_per_action = 5;
    int frames_per_video = 20;
    double extent_w = 400.0;
    double extent_h = 400.0;
    int distractor_objects = 0;   // random object detections per frame
    int distractor_actors = 0;    // low-score actor detections per frame
    NoiseSpec noise;
    std::uint64_t seed = 0;
};

struct SyntheticCorpus {
    std::vector<VideoDetections> videos;
    std::vector<GroundTruthTube> ground_truth;
    GlobalScores globals;
    EmbeddingStore embeddings;
    std::map<std::string, RelationDistribution> priors;
};

// Deterministic per seed; per-video sub-seeds keep parallel and sequential
// generation identical. Throws InputError when an object cannot be placed at
// the requested cell and size inside the extent.
SyntheticCorpus generate(const SceneSpec& spec);

SceneSpec load_scene_spec(const std::string& path);
void write_corpus(const SyntheticCorpus& corpus, const std::string& out_dir);

}  // namespace saoe
