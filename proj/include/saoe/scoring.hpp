#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saoe/corpus.hpp"
#include "saoe/embedding.hpp"
#include "saoe/relations.hpp"

namespace saoe {

struct ScoringConfig {
    // Object boxes whose center falls inside the actor box scaled by this
    // factor count as neighbors; infinity admits every object in the frame.
    double neighborhood_factor = 3.0;
    std::size_t local_top_k = 1;  // 1 for localization, 5 for classification
    RelationGridConfig grid;
    // When false the spatial term is replaced by the constant 1
    // (actors-and-objects baseline, relations ignored).
    bool use_relations = true;
};

struct ScoredBox {
    int frame_index = 0;
    Box box;
    double actor_score = 0.0;
    std::map<std::string, double> interaction_terms;
    double total = 0.0;  // actor_score + sum of interaction terms
};

std::vector<Detection> neighborhood(const Box& b, const FrameDetections& frame, double factor);

// Eq-style interaction term: w * max over label-matching neighbors of
// (detection score * relation match). 0 when no neighbor carries the label.
double object_interaction(const std::string& label, double weight, const Box& b,
                          const FrameDetections& frame,
                          const std::map<std::string, RelationDistribution>& priors,
                          const ScoringConfig& config);

// Spatial-aware embedding score for one actor box: actor probability plus the
// interaction terms of the top-k relevant objects. Negative-weight objects are
// skipped. `relevance` must already be truncated to local_top_k.
ScoredBox score_box(const Detection& actor, const FrameDetections& frame,
                    const RelevanceList& relevance,
                    const std::map<std::string, RelationDistribution>& priors,
                    const ScoringConfig& config);

struct SizedQueryTerm {
    std::string label;
    double weight = 1.0;
    RelationDistribution relation;
    std::optional<double> size_ratio;  // target object/actor area ratio
};

// Retrieval variant: the relation match m is replaced by
// q = m + max(0, 1 - |area(object)/area(actor) - r|), so q is in [0,2].
ScoredBox score_box_sized(const Detection& actor, const FrameDetections& frame,
                          const SizedQueryTerm& query, const ScoringConfig& config);

}  // namespace saoe
