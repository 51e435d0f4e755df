#pragma once

#include <map>
#include <string>
#include <vector>

#include "saoe/corpus.hpp"
#include "saoe/linking.hpp"
#include "saoe/video_scoring.hpp"

namespace saoe {

struct EvalConfig {
    std::vector<double> iou_thresholds = {0.1, 0.2, 0.3, 0.4, 0.5};
};

// Spatio-temporal IoU: per-frame box IoU averaged over the union of frames
// covered by either tube (frames covered by only one count as 0).
double st_iou(const Tube& pred, const GroundTruthTube& gt);

// Interpolation-free AP: walk the ranking, greedily match each tube to an
// unmatched same-video ground truth with st_iou >= threshold, and average the
// precision values observed at the true-positive ranks over the number of
// ground truths.
double average_precision(const std::vector<RankedTube>& ranked,
                         const std::vector<GroundTruthTube>& gts, double threshold);

// Sweep the distinct tube scores as decision thresholds; at each, TPR is
// matched gts / total gts and FPR is unmatched admitted tubes over
// max(1, tubes - gts). Trapezoidal area with the curve closed at
// (1, final TPR).
double auc(const std::vector<RankedTube>& ranked, const std::vector<GroundTruthTube>& gts,
           double threshold);

// Unweighted mean over classes of per-class accuracy. Every labeled video
// must have a prediction.
double accuracy(const std::map<std::string, std::string>& predictions,
                const std::map<std::string, std::string>& labels);

struct MetricReport {
    // action -> threshold -> AP (plus "mAP" row aggregated over actions)
    std::map<std::string, std::map<double, double>> ap;
    std::map<double, double> map_row;
    std::map<double, double> auc_row;
};

MetricReport localization_report(
    const std::map<std::string, std::vector<RankedTube>>& ranked_per_action,
    const std::vector<GroundTruthTube>& gts, const EvalConfig& config);

// Aligned human-readable table plus machine-readable JSON document.
std::string format_report(const MetricReport& report);
void save_report(const MetricReport& report, const std::string& path);

}  // namespace saoe
