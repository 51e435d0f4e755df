#include "saoe/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace saoe {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

Box parse_box(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4)
        throw InputError(where + ": box must be [x1,y1,x2,y2]");
    Box b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    if (!b.valid()) throw InputError(where + ": invalid box coordinates");
    return b;
}

json box_json(const Box& b) { return json::array({b.x1, b.y1, b.x2, b.y2}); }

Detection parse_detection(const json& j, const std::string& label_default,
                          const std::string& where) {
    Detection d;
    d.box = parse_box(j.at("box"), where);
    d.label = j.value("label", label_default);
    if (d.label.empty()) throw InputError(where + ": empty label");
    d.score = j.value("score", 1.0);
    if (!(d.score >= 0.0 && d.score <= 1.0))
        throw InputError(where + ": score " + std::to_string(d.score) + " outside [0,1]");
    return d;
}

}  // namespace

VideoDetections load_video_detections(const std::string& path) {
    const json doc = read_json(path);
    VideoDetections video;
    video.video_id = doc.at("video_id").get<std::string>();
    for (const auto& jf : doc.at("frames")) {
        FrameDetections frame;
        frame.frame_index = jf.at("index").get<int>();
        if (frame.frame_index < 0)
            throw InputError(path + ": negative frame index");
        const std::string where =
            path + " [" + video.video_id + " frame " + std::to_string(frame.frame_index) + "]";
        if (jf.contains("actors"))
            for (const auto& ja : jf["actors"]) {
                Detection d = parse_detection(ja, kActorLabel, where);
                if (d.label != kActorLabel)
                    throw InputError(where + ": actor list entry labeled '" + d.label + "'");
                frame.actors.push_back(std::move(d));
            }
        if (jf.contains("objects"))
            for (const auto& jo : jf["objects"]) {
                Detection d = parse_detection(jo, "", where);
                if (d.label == kActorLabel)
                    throw InputError(where + ": object list entry labeled 'actor'");
                frame.objects.push_back(std::move(d));
            }
        video.frames.push_back(std::move(frame));
    }
    std::sort(video.frames.begin(), video.frames.end(),
              [](const FrameDetections& a, const FrameDetections& b) {
                  return a.frame_index < b.frame_index;
              });
    for (std::size_t i = 1; i < video.frames.size(); ++i)
        if (video.frames[i].frame_index == video.frames[i - 1].frame_index)
            throw InputError(path + ": duplicate frame index " +
                             std::to_string(video.frames[i].frame_index));
    return video;
}

void save_video_detections(const VideoDetections& video, const std::string& path) {
    json frames = json::array();
    for (const auto& f : video.frames) {
        json actors = json::array();
        for (const auto& a : f.actors)
            actors.push_back({{"box", box_json(a.box)}, {"score", a.score}});
        json objects = json::array();
        for (const auto& o : f.objects)
            objects.push_back({{"label", o.label}, {"box", box_json(o.box)}, {"score", o.score}});
        frames.push_back({{"index", f.frame_index}, {"actors", actors}, {"objects", objects}});
    }
    json doc = {{"video_id", video.video_id}, {"frames", frames}};
    write_text(path, doc.dump(2) + "\n");
}

std::vector<VideoDetections> load_detections_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw InputError(dir + " is not a directory");
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    std::vector<VideoDetections> videos;
    videos.reserve(paths.size());
    for (const auto& p : paths) videos.push_back(load_video_detections(p));
    return videos;
}

GlobalScores load_global_scores(const std::string& path) {
    const json doc = read_json(path);
    if (!doc.is_object()) throw InputError(path + ": expected an object keyed by video id");
    GlobalScores globals;
    for (const auto& [video_id, scores] : doc.items()) {
        auto& m = globals[video_id];
        for (const auto& [label, p] : scores.items()) {
            const double v = p.get<double>();
            if (!(v >= 0.0 && v <= 1.0))
                throw InputError(path + ": " + video_id + "/" + label + " outside [0,1]");
            m[label] = v;
        }
    }
    return globals;
}

void save_global_scores(const GlobalScores& globals, const std::string& path) {
    json doc = json::object();
    for (const auto& [video_id, scores] : globals) {
        json m = json::object();
        for (const auto& [label, p] : scores) m[label] = p;
        doc[video_id] = std::move(m);
    }
    write_text(path, doc.dump(2) + "\n");
}

std::vector<GroundTruthTube> load_ground_truth(const std::string& path) {
    const json doc = read_json(path);
    if (!doc.is_array()) throw InputError(path + ": expected a list of tubes");
    std::vector<GroundTruthTube> gts;
    for (const auto& jt : doc) {
        GroundTruthTube gt;
        gt.video_id = jt.at("video_id").get<std::string>();
        gt.action = jt.at("action").get<std::string>();
        for (const auto& je : jt.at("tube")) {
            const int frame = je.at("frame").get<int>();
            if (!gt.boxes.empty() && frame <= gt.boxes.back().first)
                throw InputError(path + ": " + gt.video_id + ": non-increasing frame index");
            gt.boxes.emplace_back(frame, parse_box(je.at("box"), path + " " + gt.video_id));
        }
        gts.push_back(std::move(gt));
    }
    return gts;
}

void save_ground_truth(const std::vector<GroundTruthTube>& gts, const std::string& path) {
    json doc = json::array();
    for (const auto& gt : gts) {
        json tube = json::array();
        for (const auto& [frame, box] : gt.boxes)
            tube.push_back({{"frame", frame}, {"box", box_json(box)}});
        doc.push_back({{"video_id", gt.video_id}, {"action", gt.action}, {"tube", tube}});
    }
    write_text(path, doc.dump(2) + "\n");
}

}  // namespace saoe
