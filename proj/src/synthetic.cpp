#include "saoe/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

namespace saoe {

using nlohmann::json;

namespace {

// Object box realizing the requested cell and object/actor area ratio,
// kept strictly inside the cell region (2px gap) and the image extent.
Box place_object(const Box& actor, int cell, double size, double extent_w, double extent_h) {
    const double target_area = size * actor.area();
    const double gap = 2.0;
    double wo, ho, x1, y1;
    switch (cell) {
        case kOverlap: {
            wo = actor.width() * std::sqrt(size);
            ho = actor.height() * std::sqrt(size);
            x1 = actor.cx() - wo / 2;
            y1 = actor.cy() - ho / 2;
            break;
        }
        case kAbove:
        case kBelow: {
            wo = 0.7 * actor.width();
            ho = target_area / wo;
            x1 = actor.cx() - wo / 2;
            y1 = (cell == kAbove) ? actor.y1 - gap - ho : actor.y2 + gap;
            break;
        }
        case kLeft:
        case kRight: {
            ho = 0.7 * actor.height();
            wo = target_area / ho;
            x1 = (cell == kLeft) ? actor.x1 - gap - wo : actor.x2 + gap;
            y1 = actor.cy() - ho / 2;
            break;
        }
        default: {  // corner cells
            wo = ho = std::sqrt(target_area);
            x1 = (cell == kAboveLeft || cell == kBelowLeft) ? actor.x1 - gap - wo
                                                            : actor.x2 + gap;
            y1 = (cell == kAboveLeft || cell == kAboveRight) ? actor.y1 - gap - ho
                                                             : actor.y2 + gap;
            break;
        }
    }
    const Box object{x1, y1, x1 + wo, y1 + ho};
    if (object.x1 < 0 || object.y1 < 0 || object.x2 > extent_w || object.y2 > extent_h)
        throw InputError("object placement infeasible: cell " + std::to_string(cell) +
                         " at relative size " + std::to_string(size));
    const bool inside_strip = object.x1 > actor.x1 && object.x2 < actor.x2;
    const bool inside_band = object.y1 > actor.y1 && object.y2 < actor.y2;
    if ((cell == kAbove || cell == kBelow || cell == kOverlap) && !inside_strip)
        throw InputError("object too wide for cell at relative size " + std::to_string(size));
    if ((cell == kLeft || cell == kRight || cell == kOverlap) && !inside_band)
        throw InputError("object too tall for cell at relative size " + std::to_string(size));
    return object;
}

int cell_index(const std::string& name) {
    const auto dist = named_relation(name);
    for (std::size_t i = 0; i < dist.cells.size(); ++i)
        if (dist.cells[i] == 1.0) return static_cast<int>(i);
    throw InputError("unknown relation cell '" + name + "'");
}

Box jittered(const Box& b, std::mt19937_64& rng, double sigma) {
    if (sigma <= 0.0) return b;
    std::normal_distribution<double> noise(0.0, sigma);
    double x1 = b.x1 + noise(rng), y1 = b.y1 + noise(rng);
    double x2 = b.x2 + noise(rng), y2 = b.y2 + noise(rng);
    if (x2 <= x1) std::swap(x1, x2);
    if (y2 <= y1) std::swap(y1, y2);
    if (x2 == x1) x2 = x1 + 1e-3;
    if (y2 == y1) y2 = y1 + 1e-3;
    return {x1, y1, x2, y2};
}

Box random_box(std::mt19937_64& rng, double extent_w, double extent_h) {
    std::uniform_real_distribution<double> ux(0.0, extent_w), uy(0.0, extent_h);
    std::uniform_real_distribution<double> side(0.05, 0.3);
    const double w = side(rng) * extent_w;
    const double h = side(rng) * extent_h;
    const double cx = std::clamp(ux(rng), w / 2, extent_w - w / 2);
    const double cy = std::clamp(uy(rng), h / 2, extent_h - h / 2);
    return {cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2};
}

}  // namespace

SyntheticCorpus generate(const SceneSpec& spec) {
    if (spec.actions.empty()) throw InputError("scene spec has no actions");
    if (spec.noise.false_positive_rate < 0 || spec.noise.false_positive_rate > 1 ||
        spec.noise.miss_rate < 0 || spec.noise.miss_rate > 1 || spec.noise.jitter_sigma < 0)
        throw InputError("noise rates out of range");
    if (spec.extent_w <= 0 || spec.extent_h <= 0) throw InputError("non-positive extent");

    SyntheticCorpus corpus;

    // Vocabulary and orthogonal embeddings; each action name shares its
    // object's vector so its planted object has weight exactly 1.
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const auto& action : spec.actions)
        if (seen.insert(action.object_label).second) labels.push_back(action.object_label);
    corpus.embeddings.dimension = labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::vector<double> v(labels.size(), 0.0);
        v[i] = 1.0;
        corpus.embeddings.vectors[labels[i]] = v;
    }
    for (const auto& action : spec.actions) {
        const auto& object_vec = corpus.embeddings.vectors.at(action.object_label);
        std::string token;
        for (char c : action.name) {
            const char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (lc == ' ' || lc == '_') {
                if (!token.empty()) corpus.embeddings.vectors.emplace(token, object_vec);
                token.clear();
            } else {
                token.push_back(lc);
            }
        }
        if (!token.empty()) corpus.embeddings.vectors.emplace(token, object_vec);
    }

    // Priors: point mass per object in its planted cell; an object reused
    // with different cells gets the mean of its point masses.
    std::map<std::string, std::pair<std::vector<double>, std::size_t>> prior_acc;
    for (const auto& action : spec.actions) {
        auto& [sum, count] = prior_acc.try_emplace(action.object_label,
                                                   std::vector<double>(9, 0.0), 0)
                                 .first->second;
        sum[static_cast<std::size_t>(cell_index(action.relation_cell))] += 1.0;
        ++count;
    }
    for (auto& [label, entry] : prior_acc) {
        for (double& v : entry.first) v /= static_cast<double>(entry.second);
        corpus.priors.emplace(label, RelationDistribution{entry.first});
    }

    const double aw = 0.2 * spec.extent_w;
    const double ah = 0.3 * spec.extent_h;

    std::uint64_t ordinal = 0;
    for (std::size_t ai = 0; ai < spec.actions.size(); ++ai) {
        const auto& action = spec.actions[ai];
        const int cell = cell_index(action.relation_cell);
        for (int vi = 0; vi < spec.videos_per_action; ++vi, ++ordinal) {
            // Per-video sub-seed: parallel generation would match sequential.
            std::mt19937_64 rng(spec.seed ^ (0x9e3779b97f4a7c15ULL * (ordinal + 1)));
            char id[64];
            std::snprintf(id, sizeof(id), "%s_v%02d", action.name.c_str(), vi);
            VideoDetections video;
            video.video_id = id;
            GroundTruthTube gt;
            gt.video_id = id;
            gt.action = action.name;

            for (int fi = 0; fi < spec.frames_per_video; ++fi) {
                const double t = spec.frames_per_video > 1
                                     ? static_cast<double>(fi) /
                                           static_cast<double>(spec.frames_per_video - 1)
                                     : 0.0;
                const double cx = (0.42 + 0.16 * t) * spec.extent_w;
                const double cy = 0.5 * spec.extent_h;
                const Box actor{cx - aw / 2, cy - ah / 2, cx + aw / 2, cy + ah / 2};
                const Box object =
                    place_object(actor, cell, action.relative_size, spec.extent_w,
                                 spec.extent_h);
                gt.boxes.emplace_back(fi, actor);

                FrameDetections frame;
                frame.frame_index = fi;
                std::uniform_real_distribution<double> coin(0.0, 1.0);
                if (coin(rng) >= spec.noise.miss_rate)
                    frame.actors.push_back(
                        {jittered(actor, rng, spec.noise.jitter_sigma), kActorLabel, 1.0});
                if (coin(rng) >= spec.noise.miss_rate)
                    frame.objects.push_back({jittered(object, rng, spec.noise.jitter_sigma),
                                             action.object_label, 1.0});

                std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
                std::uniform_real_distribution<double> obj_score(0.1, 0.9);
                std::uniform_real_distribution<double> act_score(0.1, 0.6);
                for (int d = 0; d < spec.distractor_objects; ++d)
                    frame.objects.push_back({random_box(rng, spec.extent_w, spec.extent_h),
                                             labels[pick(rng)], obj_score(rng)});
                for (int d = 0; d < spec.distractor_actors; ++d)
                    frame.actors.push_back({random_box(rng, spec.extent_w, spec.extent_h),
                                            kActorLabel, act_score(rng)});
                if (coin(rng) < spec.noise.false_positive_rate)
                    frame.actors.push_back({random_box(rng, spec.extent_w, spec.extent_h),
                                            kActorLabel, act_score(rng)});
                if (coin(rng) < spec.noise.false_positive_rate)
                    frame.objects.push_back({random_box(rng, spec.extent_w, spec.extent_h),
                                             labels[pick(rng)], obj_score(rng)});
                video.frames.push_back(std::move(frame));
            }
            corpus.videos.push_back(std::move(video));
            corpus.ground_truth.push_back(std::move(gt));
        }
    }

    // Global scores: presence indicator per object label over the final
    // (post-noise) detections.
    for (const auto& video : corpus.videos) {
        std::set<std::string> present;
        for (const auto& frame : video.frames)
            for (const auto& o : frame.objects) present.insert(o.label);
        auto& m = corpus.globals[video.video_id];
        for (const auto& label : labels) m[label] = present.count(label) ? 1.0 : 0.0;
    }
    return corpus;
}

SceneSpec load_scene_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    SceneSpec spec;
    for (const auto& ja : doc.at("actions")) {
        ActionSpec a;
        a.name = ja.at("name").get<std::string>();
        a.object_label = ja.at("object").get<std::string>();
        a.relation_cell = ja.at("cell").get<std::string>();
        a.relative_size = ja.value("size", 0.25);
        spec.actions.push_back(std::move(a));
    }
    spec.videos_per_action = doc.value("videos_per_action", 5);
    spec.frames_per_video = doc.value("frames_per_video", 20);
    if (doc.contains("extent")) {
        spec.extent_w = doc["extent"][0].get<double>();
        spec.extent_h = doc["extent"][1].get<double>();
    }
    spec.distractor_objects = doc.value("distractor_objects", 0);
    spec.distractor_actors = doc.value("distractor_actors", 0);
    if (doc.contains("noise")) {
        const auto& jn = doc["noise"];
        spec.noise.jitter_sigma = jn.value("jitter", 0.0);
        spec.noise.false_positive_rate = jn.value("false_positive_rate", 0.0);
        spec.noise.miss_rate = jn.value("miss_rate", 0.0);
    }
    spec.seed = doc.value("seed", 0ULL);
    return spec;
}

void write_corpus(const SyntheticCorpus& corpus, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "detections");
    for (const auto& video : corpus.videos)
        save_video_detections(video,
                              (fs::path(out_dir) / "detections" / (video.video_id + ".json"))
                                  .string());
    save_ground_truth(corpus.ground_truth, (fs::path(out_dir) / "ground_truth.json").string());
    save_global_scores(corpus.globals, (fs::path(out_dir) / "globals.json").string());
    save_embeddings(corpus.embeddings, (fs::path(out_dir) / "embeddings.txt").string());
    save_priors(corpus.priors, (fs::path(out_dir) / "priors.json").string());
}

}  // namespace saoe
