#include "saoe/scoring.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <set>

namespace saoe {

std::vector<Detection> neighborhood(const Box& b, const FrameDetections& frame, double factor) {
    if (std::isinf(factor)) return frame.objects;
    const Box expanded = b.scaled(factor);
    std::vector<Detection> out;
    for (const auto& o : frame.objects)
        if (expanded.contains(o.box.cx(), o.box.cy())) out.push_back(o);
    return out;
}

namespace {

double best_object_term(const std::string& label, const Box& b,
                        const std::vector<Detection>& neighbors,
                        const RelationDistribution* prior, const ScoringConfig& config,
                        const std::optional<double>& size_ratio) {
    double best = 0.0;
    for (const auto& f : neighbors) {
        if (f.label != label) continue;
        double m = 1.0;
        if (config.use_relations && prior)
            m = relation_match(*prior, relation_distribution(b, f.box, config.grid));
        if (size_ratio) {
            const double ratio = f.box.area() / b.area();
            m += std::max(0.0, 1.0 - std::abs(ratio - *size_ratio));
        }
        best = std::max(best, f.score * m);
    }
    return best;
}

}  // namespace

double object_interaction(const std::string& label, double weight, const Box& b,
                          const FrameDetections& frame,
                          const std::map<std::string, RelationDistribution>& priors,
                          const ScoringConfig& config) {
    const auto neighbors = neighborhood(b, frame, config.neighborhood_factor);
    auto it = priors.find(label);
    RelationDistribution fallback;
    const RelationDistribution* prior = nullptr;
    if (it != priors.end()) {
        prior = &it->second;
    } else {
        const auto n = static_cast<std::size_t>(config.grid.grid_size);
        fallback = RelationDistribution::uniform(n * n);
        prior = &fallback;
        static std::mutex warn_mutex;
        static std::set<std::string> warned;
        std::lock_guard<std::mutex> lock(warn_mutex);
        if (warned.insert(label).second)
            std::cerr << "warning: no prior for object '" << label << "', using uniform\n";
    }
    return weight * best_object_term(label, b, neighbors, prior, config, std::nullopt);
}

ScoredBox score_box(const Detection& actor, const FrameDetections& frame,
                    const RelevanceList& relevance,
                    const std::map<std::string, RelationDistribution>& priors,
                    const ScoringConfig& config) {
    ScoredBox scored;
    scored.frame_index = frame.frame_index;
    scored.box = actor.box;
    scored.actor_score = actor.score;
    scored.total = actor.score;
    for (const auto& entry : relevance.entries) {
        if (entry.weight < 0.0) continue;  // a negative-weight max would invert preference
        const double term =
            object_interaction(entry.label, entry.weight, actor.box, frame, priors, config);
        scored.interaction_terms[entry.label] = term;
        scored.total += term;
    }
    return scored;
}

ScoredBox score_box_sized(const Detection& actor, const FrameDetections& frame,
                          const SizedQueryTerm& query, const ScoringConfig& config) {
    ScoredBox scored;
    scored.frame_index = frame.frame_index;
    scored.box = actor.box;
    scored.actor_score = actor.score;
    scored.total = actor.score;
    const auto neighbors = neighborhood(actor.box, frame, config.neighborhood_factor);
    const double term = query.weight * best_object_term(query.label, actor.box, neighbors,
                                                        &query.relation, config,
                                                        query.size_ratio);
    scored.interaction_terms[query.label] = term;
    scored.total += term;
    return scored;
}

}  // namespace saoe
