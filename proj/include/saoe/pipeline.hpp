#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "saoe/corpus.hpp"
#include "saoe/embedding.hpp"
#include "saoe/evaluation.hpp"
#include "saoe/linking.hpp"
#include "saoe/relations.hpp"
#include "saoe/scoring.hpp"
#include "saoe/video_scoring.hpp"

namespace saoe {

// Runs fn(i) for i in [0, n) across `workers` threads. Results must be
// written to pre-sized slots keyed by i so assembly order never matters.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

struct PipelineConfig {
    ScoringConfig scoring;
    LinkingConfig linking;
    EvalConfig eval;
    std::size_t global_top_k = 100;
    std::size_t top_per_video = 1;
    std::size_t workers = 1;
};

// Score every actor box of the video for one action and link tubes.
std::vector<Tube> build_tubes(const VideoDetections& video, const std::string& action,
                              const RelevanceList& relevance,
                              const std::map<std::string, RelationDistribution>& priors,
                              const ScoringConfig& scoring, const LinkingConfig& linking);

struct LocalizationResult {
    // action -> relevance list actually used (truncated to local_top_k)
    std::map<std::string, RelevanceList> relevances;
    std::map<std::string, std::vector<RankedTube>> ranked_per_action;
};

LocalizationResult run_localization(const std::vector<VideoDetections>& videos,
                                    const std::vector<std::string>& actions,
                                    const std::vector<std::string>& candidate_labels,
                                    const EmbeddingStore& store,
                                    const std::map<std::string, RelationDistribution>& priors,
                                    const GlobalScores& globals, const PipelineConfig& config);

std::map<std::string, Classification> run_classification(
    const std::vector<VideoDetections>& videos, const std::vector<std::string>& actions,
    const std::vector<std::string>& candidate_labels, const EmbeddingStore& store,
    const std::map<std::string, RelationDistribution>& priors, const GlobalScores& globals,
    const PipelineConfig& config);

struct CompositeQuery {
    std::string object_label;
    RelationDistribution relation;
    std::optional<double> size_ratio;  // object/actor area ratio
    std::optional<std::string> action;  // enables the global term
    std::size_t top_n = 10;
};

// Re-score every actor box against the query (weight fixed to 1), link, and
// rank across the collection.
std::vector<RankedTube> retrieve(const CompositeQuery& query,
                                 const std::vector<VideoDetections>& videos,
                                 const EmbeddingStore* store, const GlobalScores* globals,
                                 const std::vector<std::string>* candidate_labels,
                                 const PipelineConfig& config);

}  // namespace saoe
