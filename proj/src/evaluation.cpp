#include "saoe/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

namespace saoe {

double st_iou(const Tube& pred, const GroundTruthTube& gt) {
    if (pred.video_id != gt.video_id)
        throw InputError("st_iou across different videos");
    std::map<int, const Box*> pred_boxes, gt_boxes;
    for (const auto& e : pred.elements) pred_boxes[e.frame_index] = &e.box;
    for (const auto& [frame, box] : gt.boxes) gt_boxes[frame] = &box;
    std::set<int> frames;
    for (const auto& [f, _] : pred_boxes) frames.insert(f);
    for (const auto& [f, _] : gt_boxes) frames.insert(f);
    if (frames.empty()) return 0.0;
    double sum = 0.0;
    for (int f : frames) {
        auto p = pred_boxes.find(f);
        auto g = gt_boxes.find(f);
        if (p != pred_boxes.end() && g != gt_boxes.end()) sum += iou(*p->second, *g->second);
    }
    return sum / static_cast<double>(frames.size());
}

namespace {

// Greedy matching down the ranking: rank i is a hit when the tube overlaps a
// not-yet-matched same-video ground truth at or above the threshold.
std::vector<bool> match_ranking(const std::vector<RankedTube>& ranked,
                                const std::vector<GroundTruthTube>& gts, double threshold) {
    std::vector<bool> gt_used(gts.size(), false);
    std::vector<bool> hits(ranked.size(), false);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (gt_used[g] || gts[g].video_id != ranked[i].tube.video_id) continue;
            if (st_iou(ranked[i].tube, gts[g]) >= threshold) {
                gt_used[g] = true;
                hits[i] = true;
                break;
            }
        }
    }
    return hits;
}

}  // namespace

double average_precision(const std::vector<RankedTube>& ranked,
                         const std::vector<GroundTruthTube>& gts, double threshold) {
    if (gts.empty()) throw InputError("no ground truth for action");
    const auto hits = match_ranking(ranked, gts, threshold);
    double sum = 0.0;
    std::size_t tp = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (!hits[i]) continue;
        ++tp;
        sum += static_cast<double>(tp) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(gts.size());
}

double auc(const std::vector<RankedTube>& ranked, const std::vector<GroundTruthTube>& gts,
           double threshold) {
    if (gts.empty()) throw InputError("no ground truth for action");
    const auto hits = match_ranking(ranked, gts, threshold);
    const double total_gts = static_cast<double>(gts.size());
    const double fpr_denom =
        std::max(1.0, static_cast<double>(ranked.size()) - total_gts);

    // Admit tubes in score order; thresholds are the distinct scores, so a
    // block of tied scores is admitted atomically.
    std::vector<std::pair<double, double>> curve;  // (FPR, TPR)
    curve.emplace_back(0.0, 0.0);
    std::size_t matched = 0, unmatched = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (hits[i]) ++matched;
        else ++unmatched;
        const bool block_end =
            i + 1 == ranked.size() ||
            ranked[i + 1].combined_score != ranked[i].combined_score;
        // FPR is capped at 1: with the clamped denominator the raw ratio
        // exceeds 1 whenever ground truths stay unmatched.
        if (block_end)
            curve.emplace_back(std::min(1.0, static_cast<double>(unmatched) / fpr_denom),
                               static_cast<double>(matched) / total_gts);
    }
    curve.emplace_back(1.0, curve.back().second);

    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double dx = curve[i].first - curve[i - 1].first;
        if (dx > 0.0) area += dx * 0.5 * (curve[i].second + curve[i - 1].second);
    }
    return area;
}

double accuracy(const std::map<std::string, std::string>& predictions,
                const std::map<std::string, std::string>& labels) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_class;  // correct, total
    for (const auto& [video_id, label] : labels) {
        auto it = predictions.find(video_id);
        if (it == predictions.end())
            throw InputError("missing prediction for video '" + video_id + "'");
        auto& [correct, total] = per_class[label];
        ++total;
        if (it->second == label) ++correct;
    }
    if (per_class.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [label, counts] : per_class)
        sum += static_cast<double>(counts.first) / static_cast<double>(counts.second);
    return sum / static_cast<double>(per_class.size());
}

MetricReport localization_report(
    const std::map<std::string, std::vector<RankedTube>>& ranked_per_action,
    const std::vector<GroundTruthTube>& gts, const EvalConfig& config) {
    MetricReport report;
    for (const auto& [action, ranked] : ranked_per_action) {
        std::vector<GroundTruthTube> action_gts;
        for (const auto& gt : gts)
            if (gt.action == action) action_gts.push_back(gt);
        for (double threshold : config.iou_thresholds) {
            const double ap = average_precision(ranked, action_gts, threshold);
            const double a = auc(ranked, action_gts, threshold);
            report.ap[action][threshold] = ap;
            report.map_row[threshold] += ap / static_cast<double>(ranked_per_action.size());
            report.auc_row[threshold] += a / static_cast<double>(ranked_per_action.size());
        }
    }
    return report;
}

std::string format_report(const MetricReport& report) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << std::left << std::setw(20) << "action";
    if (!report.map_row.empty())
        for (const auto& [threshold, _] : report.map_row)
            out << std::right << std::setw(10) << threshold;
    out << "\n";
    for (const auto& [action, row] : report.ap) {
        out << std::left << std::setw(20) << action;
        for (const auto& [_, ap] : row) out << std::right << std::setw(10) << ap;
        out << "\n";
    }
    out << std::left << std::setw(20) << "mAP";
    for (const auto& [_, v] : report.map_row) out << std::right << std::setw(10) << v;
    out << "\n";
    out << std::left << std::setw(20) << "AUC";
    for (const auto& [_, v] : report.auc_row) out << std::right << std::setw(10) << v;
    out << "\n";
    return out.str();
}

void save_report(const MetricReport& report, const std::string& path) {
    nlohmann::json doc;
    auto row_to_json = [](const std::map<double, double>& row) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [threshold, v] : row) {
            std::ostringstream key;
            key << threshold;
            j[key.str()] = v;
        }
        return j;
    };
    nlohmann::json ap = nlohmann::json::object();
    for (const auto& [action, row] : report.ap) ap[action] = row_to_json(row);
    doc["ap"] = ap;
    doc["map"] = row_to_json(report.map_row);
    doc["auc"] = row_to_json(report.auc_row);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace saoe
