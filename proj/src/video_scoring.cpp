#include "saoe/video_scoring.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace saoe {

using nlohmann::json;

double global_score(const std::string& video_id, const GlobalScores& globals,
                    const RelevanceList& relevance) {
    auto vit = globals.find(video_id);
    if (vit == globals.end()) throw InputError("unknown video id '" + video_id + "'");
    double score = 0.0;
    for (const auto& entry : relevance.entries) {
        if (entry.weight < 0.0) continue;
        auto lit = vit->second.find(entry.label);
        if (lit != vit->second.end()) score += entry.weight * lit->second;
    }
    return score;
}

std::vector<RankedTube> rank_localizations(const std::vector<Tube>& tubes,
                                           const GlobalScores& globals,
                                           const RelevanceList& relevance,
                                           std::size_t top_per_video) {
    // Tube position within its video is the tie-break key, so record it
    // before any reordering.
    struct Entry {
        RankedTube ranked;
        std::size_t position;
    };
    std::map<std::string, std::vector<Entry>> per_video;
    for (const auto& tube : tubes) {
        auto& list = per_video[tube.video_id];
        Entry e;
        e.ranked.tube = tube;
        e.ranked.combined_score =
            tube.embedding_score + global_score(tube.video_id, globals, relevance);
        e.position = list.size();
        list.push_back(std::move(e));
    }
    std::vector<Entry> kept;
    for (auto& [video_id, list] : per_video) {
        std::stable_sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) {
            return a.ranked.combined_score > b.ranked.combined_score;
        });
        if (list.size() > top_per_video) list.resize(top_per_video);
        for (auto& e : list) kept.push_back(std::move(e));
    }
    std::sort(kept.begin(), kept.end(), [](const Entry& a, const Entry& b) {
        if (a.ranked.combined_score != b.ranked.combined_score)
            return a.ranked.combined_score > b.ranked.combined_score;
        if (a.ranked.tube.video_id != b.ranked.tube.video_id)
            return a.ranked.tube.video_id < b.ranked.tube.video_id;
        return a.position < b.position;
    });
    std::vector<RankedTube> out;
    out.reserve(kept.size());
    for (auto& e : kept) out.push_back(std::move(e.ranked));
    return out;
}

Classification classify(const std::string& video_id,
                        const std::map<std::string, std::vector<Tube>>& tubes_per_action,
                        const GlobalScores& globals,
                        const std::map<std::string, RelevanceList>& relevances) {
    if (tubes_per_action.empty()) throw InputError("empty action set");
    Classification result;
    for (const auto& [action, tubes] : tubes_per_action) {
        double pooled = 0.0;  // no tubes: global evidence alone decides
        for (const auto& tube : tubes) pooled = std::max(pooled, tube.embedding_score);
        const auto rit = relevances.find(action);
        if (rit == relevances.end())
            throw InputError("no relevance list for action '" + action + "'");
        result.scores[action] = pooled + global_score(video_id, globals, rit->second);
    }
    // std::map iterates lexicographically, so the first strict maximum is the
    // tie-broken argmax.
    result.predicted = result.scores.begin()->first;
    for (const auto& [action, score] : result.scores)
        if (score > result.scores.at(result.predicted)) result.predicted = action;
    return result;
}

void save_ranked_tubes(const std::vector<RankedTube>& tubes, const std::string& path) {
    std::vector<Tube> plain;
    std::vector<double> scores;
    plain.reserve(tubes.size());
    for (const auto& rt : tubes) {
        plain.push_back(rt.tube);
        scores.push_back(rt.combined_score);
    }
    save_tubes(plain, path, &scores);
}

std::vector<RankedTube> load_ranked_tubes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    std::vector<RankedTube> tubes;
    for (const auto& jt : doc) {
        RankedTube rt;
        rt.tube.video_id = jt.at("video_id").get<std::string>();
        rt.tube.action = jt.at("action").get<std::string>();
        rt.combined_score = jt.at("score").get<double>();
        double sum = 0.0;
        for (const auto& je : jt.at("tube")) {
            TubeElement e;
            e.frame_index = je.at("frame").get<int>();
            const auto& b = je.at("box");
            e.box = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                     b[3].get<double>()};
            e.box_total = je.at("box_score").get<double>();
            sum += e.box_total;
            rt.tube.elements.push_back(std::move(e));
        }
        if (!rt.tube.elements.empty())
            rt.tube.embedding_score = sum / static_cast<double>(rt.tube.elements.size());
        tubes.push_back(std::move(rt));
    }
    return tubes;
}

void save_classifications(const std::map<std::string, Classification>& results,
                          const std::string& path) {
    json doc = json::object();
    for (const auto& [video_id, cls] : results) {
        json scores = json::object();
        for (const auto& [action, score] : cls.scores) scores[action] = score;
        doc[video_id] = {{"predicted", cls.predicted}, {"scores", scores}};
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace saoe
