#include "saoe/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace saoe {

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<Tube> build_tubes(const VideoDetections& video, const std::string& action,
                              const RelevanceList& relevance,
                              const std::map<std::string, RelationDistribution>& priors,
                              const ScoringConfig& scoring, const LinkingConfig& linking) {
    std::vector<std::vector<ScoredBox>> per_frame;
    per_frame.reserve(video.frames.size());
    for (const auto& frame : video.frames) {
        std::vector<ScoredBox> boxes;
        boxes.reserve(frame.actors.size());
        for (const auto& actor : frame.actors)
            boxes.push_back(score_box(actor, frame, relevance, priors, scoring));
        per_frame.push_back(std::move(boxes));
    }
    return extract_tubes(video.video_id, action, per_frame, linking);
}

namespace {

// (video x action) fan-out with results keyed by task index, so the merge is
// identical for any worker count.
std::vector<std::vector<Tube>> tubes_for_all(
    const std::vector<VideoDetections>& videos, const std::vector<std::string>& actions,
    const std::map<std::string, RelevanceList>& relevances,
    const std::map<std::string, RelationDistribution>& priors, const PipelineConfig& config) {
    const std::size_t n = videos.size() * actions.size();
    std::vector<std::vector<Tube>> results(n);
    parallel_for(n, config.workers, [&](std::size_t task) {
        const auto& video = videos[task / actions.size()];
        const auto& action = actions[task % actions.size()];
        results[task] = build_tubes(video, action, relevances.at(action), priors,
                                    config.scoring, config.linking);
    });
    return results;
}

}  // namespace

LocalizationResult run_localization(const std::vector<VideoDetections>& videos,
                                    const std::vector<std::string>& actions,
                                    const std::vector<std::string>& candidate_labels,
                                    const EmbeddingStore& store,
                                    const std::map<std::string, RelationDistribution>& priors,
                                    const GlobalScores& globals, const PipelineConfig& config) {
    LocalizationResult result;
    std::map<std::string, RelevanceList> global_relevances;
    for (const auto& action : actions) {
        const auto full = select_top_objects(action, candidate_labels, store,
                                             candidate_labels.size());
        result.relevances[action] = full.truncated(config.scoring.local_top_k);
        global_relevances[action] = full.truncated(config.global_top_k);
    }
    const auto all_tubes =
        tubes_for_all(videos, actions, result.relevances, priors, config);
    for (std::size_t a = 0; a < actions.size(); ++a) {
        std::vector<Tube> action_tubes;
        for (std::size_t v = 0; v < videos.size(); ++v)
            for (const auto& tube : all_tubes[v * actions.size() + a])
                action_tubes.push_back(tube);
        result.ranked_per_action[actions[a]] = rank_localizations(
            action_tubes, globals, global_relevances[actions[a]], config.top_per_video);
    }
    return result;
}

std::map<std::string, Classification> run_classification(
    const std::vector<VideoDetections>& videos, const std::vector<std::string>& actions,
    const std::vector<std::string>& candidate_labels, const EmbeddingStore& store,
    const std::map<std::string, RelationDistribution>& priors, const GlobalScores& globals,
    const PipelineConfig& config) {
    std::map<std::string, RelevanceList> local_relevances, global_relevances;
    for (const auto& action : actions) {
        const auto full = select_top_objects(action, candidate_labels, store,
                                             candidate_labels.size());
        local_relevances[action] = full.truncated(config.scoring.local_top_k);
        global_relevances[action] = full.truncated(config.global_top_k);
    }
    const auto all_tubes =
        tubes_for_all(videos, actions, local_relevances, priors, config);
    std::map<std::string, Classification> results;
    for (std::size_t v = 0; v < videos.size(); ++v) {
        std::map<std::string, std::vector<Tube>> per_action;
        for (std::size_t a = 0; a < actions.size(); ++a)
            per_action[actions[a]] = all_tubes[v * actions.size() + a];
        results[videos[v].video_id] =
            classify(videos[v].video_id, per_action, globals, global_relevances);
    }
    return results;
}

std::vector<RankedTube> retrieve(const CompositeQuery& query,
                                 const std::vector<VideoDetections>& videos,
                                 const EmbeddingStore* store, const GlobalScores* globals,
                                 const std::vector<std::string>* candidate_labels,
                                 const PipelineConfig& config) {
    bool label_known = false;
    for (const auto& video : videos) {
        for (const auto& frame : video.frames)
            for (const auto& o : frame.objects)
                if (o.label == query.object_label) {
                    label_known = true;
                    break;
                }
        if (label_known) break;
    }
    if (!label_known)
        throw InputError("query object '" + query.object_label +
                         "' absent from the detection vocabulary");

    SizedQueryTerm term;
    term.label = query.object_label;
    term.weight = 1.0;  // the user asserts relevance
    term.relation = query.relation;
    term.size_ratio = query.size_ratio;

    std::vector<std::vector<Tube>> per_video(videos.size());
    parallel_for(videos.size(), config.workers, [&](std::size_t v) {
        const auto& video = videos[v];
        std::vector<std::vector<ScoredBox>> per_frame;
        per_frame.reserve(video.frames.size());
        for (const auto& frame : video.frames) {
            std::vector<ScoredBox> boxes;
            for (const auto& actor : frame.actors)
                boxes.push_back(score_box_sized(actor, frame, term, config.scoring));
            per_frame.push_back(std::move(boxes));
        }
        per_video[v] = extract_tubes(video.video_id, query.action.value_or("query"),
                                     per_frame, config.linking);
    });

    std::vector<Tube> tubes;
    for (auto& list : per_video)
        for (auto& tube : list) tubes.push_back(std::move(tube));

    RelevanceList relevance;  // empty -> global term 0
    if (query.action && store && globals && candidate_labels) {
        const auto full = select_top_objects(*query.action, *candidate_labels, *store,
                                             candidate_labels->size());
        relevance = full.truncated(config.global_top_k);
    }
    GlobalScores empty_globals;
    if (!globals || !query.action) {
        // No global term: give every video an empty score map.
        for (const auto& video : videos) empty_globals[video.video_id] = {};
    }
    auto ranked = rank_localizations(
        tubes, (globals && query.action) ? *globals : empty_globals, relevance,
        config.top_per_video);
    if (ranked.size() > query.top_n) ranked.resize(query.top_n);
    return ranked;
}

}  // namespace saoe
