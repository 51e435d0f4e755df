#pragma once

#include <string>
#include <vector>

#include "saoe/scoring.hpp"

namespace saoe {

struct TubeElement {
    int frame_index = 0;
    Box box;
    double box_total = 0.0;
};

struct Tube {
    std::string video_id;
    std::string action;
    std::vector<TubeElement> elements;
    double embedding_score = 0.0;  // mean of element box totals
};

struct LinkingConfig {
    double overlap_weight = 1.0;  // lambda on the pairwise IoU edge term
    std::size_t max_tubes = 3;
};

// One frame of linkable candidates; consecutive entries must hold consecutive
// frame indices (extract_tubes performs the segmentation).
using Segment = std::vector<std::vector<ScoredBox>>;

// Viterbi over the segment maximizing sum of box totals plus
// lambda * sum of consecutive-frame IoUs. Ties resolve to the
// lexicographically smallest box-index path. Returns the chosen indices and
// stores the path value.
struct LinkedPath {
    std::vector<std::size_t> box_indices;  // one per frame
    double value = 0.0;
};
LinkedPath link_once(const Segment& segment, const LinkingConfig& config);

// Split the video's per-frame candidates into maximal contiguous segments
// with at least one box, repeatedly link and remove boxes until max_tubes per
// segment or exhaustion; tubes sorted by embedding score descending.
std::vector<Tube> extract_tubes(const std::string& video_id, const std::string& action,
                                const std::vector<std::vector<ScoredBox>>& per_frame,
                                const LinkingConfig& config);

void save_tubes(const std::vector<Tube>& tubes, const std::string& path,
                const std::vector<double>* combined_scores = nullptr);

}  // namespace saoe
