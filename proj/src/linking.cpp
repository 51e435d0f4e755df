#include "saoe/linking.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "saoe/corpus.hpp"

namespace saoe {

LinkedPath link_once(const Segment& segment, const LinkingConfig& config) {
    if (segment.empty()) throw InputError("empty segment");
    for (const auto& frame : segment)
        if (frame.empty()) throw InputError("segment frame with no boxes");

    const std::size_t n_frames = segment.size();
    // Suffix values: best[t][i] = max path value over frames t..end starting
    // at box i of frame t. Filling backward lets the forward walk pick the
    // lexicographically smallest optimal path.
    std::vector<std::vector<double>> best(n_frames);
    for (std::size_t t = n_frames; t-- > 0;) {
        const auto& boxes = segment[t];
        best[t].resize(boxes.size());
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            double v = boxes[i].total;
            if (t + 1 < n_frames) {
                double edge_best = -std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < segment[t + 1].size(); ++j)
                    edge_best = std::max(edge_best, config.overlap_weight *
                                                            iou(boxes[i].box,
                                                                segment[t + 1][j].box) +
                                                        best[t + 1][j]);
                v += edge_best;
            }
            best[t][i] = v;
        }
    }

    LinkedPath path;
    path.box_indices.reserve(n_frames);
    std::size_t current = 0;
    for (std::size_t i = 1; i < best[0].size(); ++i)
        if (best[0][i] > best[0][current]) current = i;
    path.value = best[0][current];
    path.box_indices.push_back(current);
    for (std::size_t t = 1; t < n_frames; ++t) {
        const Box& prev = segment[t - 1][current].box;
        std::size_t next = 0;
        double next_value = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < segment[t].size(); ++j) {
            const double v =
                config.overlap_weight * iou(prev, segment[t][j].box) + best[t][j];
            if (v > next_value) {
                next_value = v;
                next = j;
            }
        }
        current = next;
        path.box_indices.push_back(current);
    }
    return path;
}

std::vector<Tube> extract_tubes(const std::string& video_id, const std::string& action,
                                const std::vector<std::vector<ScoredBox>>& per_frame,
                                const LinkingConfig& config) {
    // Maximal contiguous segments: consecutive frame indices, each with >= 1 box.
    struct Seg {
        std::size_t begin, end;  // half-open range into per_frame
    };
    std::vector<Seg> segments;
    std::size_t i = 0;
    while (i < per_frame.size()) {
        if (per_frame[i].empty()) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < per_frame.size() && !per_frame[j].empty() &&
               per_frame[j][0].frame_index == per_frame[j - 1][0].frame_index + 1)
            ++j;
        segments.push_back({i, j});
        i = j;
    }

    std::vector<Tube> tubes;
    for (const auto& seg : segments) {
        Segment remaining(per_frame.begin() + static_cast<std::ptrdiff_t>(seg.begin),
                          per_frame.begin() + static_cast<std::ptrdiff_t>(seg.end));
        for (std::size_t round = 0; round < config.max_tubes; ++round) {
            bool exhausted = false;
            for (const auto& frame : remaining)
                if (frame.empty()) exhausted = true;
            if (exhausted) break;
            const auto path = link_once(remaining, config);
            Tube tube;
            tube.video_id = video_id;
            tube.action = action;
            double total_sum = 0.0;
            for (std::size_t t = 0; t < remaining.size(); ++t) {
                const auto& sb = remaining[t][path.box_indices[t]];
                tube.elements.push_back({sb.frame_index, sb.box, sb.total});
                total_sum += sb.total;
                remaining[t].erase(remaining[t].begin() +
                                   static_cast<std::ptrdiff_t>(path.box_indices[t]));
            }
            tube.embedding_score = total_sum / static_cast<double>(tube.elements.size());
            tubes.push_back(std::move(tube));
        }
    }
    std::stable_sort(tubes.begin(), tubes.end(), [](const Tube& a, const Tube& b) {
        return a.embedding_score > b.embedding_score;
    });
    return tubes;
}

void save_tubes(const std::vector<Tube>& tubes, const std::string& path,
                const std::vector<double>* combined_scores) {
    nlohmann::json doc = nlohmann::json::array();
    for (std::size_t i = 0; i < tubes.size(); ++i) {
        const Tube& t = tubes[i];
        nlohmann::json elems = nlohmann::json::array();
        for (const auto& e : t.elements)
            elems.push_back({{"frame", e.frame_index},
                             {"box", {e.box.x1, e.box.y1, e.box.x2, e.box.y2}},
                             {"box_score", e.box_total}});
        const double score = combined_scores ? (*combined_scores)[i] : t.embedding_score;
        doc.push_back({{"video_id", t.video_id},
                       {"action", t.action},
                       {"score", score},
                       {"tube", elems}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace saoe
