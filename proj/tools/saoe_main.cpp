// Command-line front end for the spatial-aware action tube pipeline:
// prior mining, localization, classification, retrieval, evaluation, and
// synthetic corpus generation.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "saoe/pipeline.hpp"
#include "saoe/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitInternalError = 1;

struct CommonOptions {
    std::string detections_dir;
    std::string embeddings_path;
    std::string priors_path;
    std::string globals_path;
    std::string ground_truth_path;
    std::string output_dir = ".";
    saoe::PipelineConfig pipeline;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_embeddings = true) {
    cmd->add_option("--detections", opt.detections_dir, "Directory of per-video detection files")
        ->required();
    if (needs_embeddings)
        cmd->add_option("--embeddings", opt.embeddings_path, "Word embedding file")->required();
    cmd->add_option("--priors", opt.priors_path, "Relation priors file");
    cmd->add_option("--globals", opt.globals_path, "Global object scores file");
    cmd->add_option("--ground-truth", opt.ground_truth_path, "Ground truth tubes file");
    cmd->add_option("--output", opt.output_dir, "Output directory");
    cmd->add_option("--workers", opt.pipeline.workers, "Worker thread count");
    cmd->add_option("--local-top-k", opt.pipeline.scoring.local_top_k,
                    "Relevant local objects per action");
    cmd->add_option("--global-top-k", opt.pipeline.global_top_k,
                    "Relevant global objects per action");
    cmd->add_option("--top-per-video", opt.pipeline.top_per_video,
                    "Tubes kept per video before global ranking");
    cmd->add_option("--neighborhood", opt.pipeline.scoring.neighborhood_factor,
                    "Neighborhood scale factor (actor box multiple)");
    cmd->add_option("--grid-size", opt.pipeline.scoring.grid.grid_size,
                    "Relation grid size (odd, >= 3)");
    cmd->add_flag("--center-mode", [&opt](std::int64_t) {
        opt.pipeline.scoring.grid.area_mode = false;
    }, "Assign relations by object center instead of area fractions");
    cmd->add_flag("--no-relations", [&opt](std::int64_t) {
        opt.pipeline.scoring.use_relations = false;
    }, "Ignore spatial relations (actors-and-objects baseline)");
    cmd->add_option("--overlap-weight", opt.pipeline.linking.overlap_weight,
                    "Lambda on the linking IoU term");
    cmd->add_option("--max-tubes", opt.pipeline.linking.max_tubes, "Tubes per segment");
}

struct LoadedCorpus {
    std::vector<saoe::VideoDetections> videos;
    saoe::EmbeddingStore embeddings;
    std::map<std::string, saoe::RelationDistribution> priors;
    saoe::GlobalScores globals;
    std::vector<saoe::GroundTruthTube> ground_truth;
    std::vector<std::string> candidate_labels;
};

LoadedCorpus load_corpus(const CommonOptions& opt, bool needs_priors, bool needs_embeddings) {
    LoadedCorpus corpus;
    corpus.videos = saoe::load_detections_dir(opt.detections_dir);
    if (needs_embeddings) {
        if (opt.embeddings_path.empty()) throw saoe::InputError("missing --embeddings");
        corpus.embeddings = saoe::load_embeddings(opt.embeddings_path);
    }
    if (!opt.priors_path.empty())
        corpus.priors = saoe::load_priors(opt.priors_path);
    else if (needs_priors)
        throw saoe::InputError("missing --priors file");
    if (!opt.globals_path.empty()) corpus.globals = saoe::load_global_scores(opt.globals_path);
    for (const auto& video : corpus.videos)
        if (!corpus.globals.count(video.video_id)) corpus.globals[video.video_id] = {};
    if (!opt.ground_truth_path.empty())
        corpus.ground_truth = saoe::load_ground_truth(opt.ground_truth_path);
    // Candidate objects for relevance selection: labels carrying a mined prior.
    for (const auto& [label, _] : corpus.priors) corpus.candidate_labels.push_back(label);
    return corpus;
}

std::vector<std::string> resolve_actions(const std::string& actions_flag,
                                         const std::vector<saoe::GroundTruthTube>& gts) {
    std::vector<std::string> actions;
    if (!actions_flag.empty()) {
        std::stringstream ss(actions_flag);
        std::string a;
        while (std::getline(ss, a, ','))
            if (!a.empty()) actions.push_back(a);
    } else {
        std::set<std::string> seen;
        for (const auto& gt : gts)
            if (seen.insert(gt.action).second) actions.push_back(gt.action);
        std::sort(actions.begin(), actions.end());
    }
    if (actions.empty())
        throw saoe::InputError("no actions: pass --actions or --ground-truth");
    return actions;
}

void log_relevances(const std::map<std::string, saoe::RelevanceList>& relevances) {
    for (const auto& [action, list] : relevances) {
        std::cerr << "action '" << action << "' top objects:";
        for (const auto& e : list.entries) std::cerr << " " << e.label << "(" << e.weight << ")";
        std::cerr << "\n";
    }
}

int cmd_mine_priors(const std::string& annotations_dir, const std::string& out_path,
                    double closeness, int grid_size) {
    saoe::PriorMiningConfig config;
    config.closeness_factor = closeness;
    config.grid.grid_size = grid_size;
    const auto annotations = saoe::load_detections_dir(annotations_dir);
    const auto priors = saoe::mine_priors(annotations, config);
    saoe::save_priors(priors, out_path);
    std::cerr << "mined priors for " << priors.size() << " labels -> " << out_path << "\n";
    return 0;
}

int cmd_localize(const CommonOptions& opt, const std::string& actions_flag) {
    const auto corpus = load_corpus(opt, /*needs_priors=*/true, /*needs_embeddings=*/true);
    const auto actions = resolve_actions(actions_flag, corpus.ground_truth);
    const auto result =
        saoe::run_localization(corpus.videos, actions, corpus.candidate_labels,
                               corpus.embeddings, corpus.priors, corpus.globals, opt.pipeline);
    log_relevances(result.relevances);
    fs::create_directories(opt.output_dir);
    for (const auto& [action, ranked] : result.ranked_per_action)
        saoe::save_ranked_tubes(ranked,
                                (fs::path(opt.output_dir) / ("tubes_" + action + ".json"))
                                    .string());
    if (!corpus.ground_truth.empty()) {
        const auto report = saoe::localization_report(result.ranked_per_action,
                                                      corpus.ground_truth, opt.pipeline.eval);
        std::cout << saoe::format_report(report);
        saoe::save_report(report, (fs::path(opt.output_dir) / "report.json").string());
    }
    return 0;
}

int cmd_classify(const CommonOptions& opt, const std::string& actions_flag) {
    const auto corpus = load_corpus(opt, /*needs_priors=*/true, /*needs_embeddings=*/true);
    const auto actions = resolve_actions(actions_flag, corpus.ground_truth);
    const auto results =
        saoe::run_classification(corpus.videos, actions, corpus.candidate_labels,
                                 corpus.embeddings, corpus.priors, corpus.globals, opt.pipeline);
    fs::create_directories(opt.output_dir);
    saoe::save_classifications(results,
                               (fs::path(opt.output_dir) / "predictions.json").string());
    if (!corpus.ground_truth.empty()) {
        std::map<std::string, std::string> predictions, labels;
        for (const auto& [video_id, cls] : results) predictions[video_id] = cls.predicted;
        for (const auto& gt : corpus.ground_truth) labels[gt.video_id] = gt.action;
        std::cout << "accuracy " << saoe::accuracy(predictions, labels) << "\n";
    }
    return 0;
}

int cmd_retrieve(const CommonOptions& opt, const std::string& object_label,
                 const std::string& relation_flag, double size_ratio,
                 const std::string& action_flag, std::size_t top_n) {
    const bool with_action = !action_flag.empty();
    const auto corpus = load_corpus(opt, /*needs_priors=*/false,
                                    /*needs_embeddings=*/with_action);
    saoe::CompositeQuery query;
    query.object_label = object_label;
    query.top_n = top_n;
    if (size_ratio > 0.0) query.size_ratio = size_ratio;
    if (with_action) query.action = action_flag;
    // Relation: a named cell, 9 space-separated reals, or "prior" for the
    // mined prior of the query object.
    if (relation_flag == "prior") {
        auto it = corpus.priors.find(object_label);
        if (it == corpus.priors.end())
            throw saoe::InputError("no mined prior for '" + object_label + "'");
        query.relation = it->second;
    } else {
        std::istringstream ss(relation_flag);
        std::vector<double> cells;
        double v;
        while (ss >> v) cells.push_back(v);
        if (cells.size() == 9) {
            double sum = 0.0;
            for (double c : cells) sum += c;
            if (sum <= 0.0) throw saoe::InputError("relation cells sum to 0");
            for (double& c : cells) c /= sum;
            query.relation = saoe::RelationDistribution{std::move(cells)};
        } else {
            query.relation = saoe::named_relation(relation_flag);
        }
    }
    const auto ranked = saoe::retrieve(
        query, corpus.videos, with_action ? &corpus.embeddings : nullptr,
        with_action ? &corpus.globals : nullptr,
        with_action ? &corpus.candidate_labels : nullptr, opt.pipeline);
    fs::create_directories(opt.output_dir);
    saoe::save_ranked_tubes(ranked, (fs::path(opt.output_dir) / "retrieved.json").string());
    for (const auto& rt : ranked)
        std::cout << rt.tube.video_id << " " << rt.combined_score << "\n";
    return 0;
}

int cmd_eval(const std::string& tubes_dir, const std::string& gt_path,
             const saoe::EvalConfig& config, const std::string& out_path) {
    const auto gts = saoe::load_ground_truth(gt_path);
    std::map<std::string, std::vector<saoe::RankedTube>> per_action;
    for (const auto& entry : fs::directory_iterator(tubes_dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("tubes_", 0) != 0 || entry.path().extension() != ".json") continue;
        auto ranked = saoe::load_ranked_tubes(entry.path().string());
        if (ranked.empty()) continue;
        per_action[ranked.front().tube.action] = std::move(ranked);
    }
    const auto report = saoe::localization_report(per_action, gts, config);
    std::cout << saoe::format_report(report);
    if (!out_path.empty()) saoe::save_report(report, out_path);
    return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
    const auto spec = saoe::load_scene_spec(spec_path);
    const auto corpus = saoe::generate(spec);
    saoe::write_corpus(corpus, out_dir);
    std::cerr << "wrote " << corpus.videos.size() << " videos -> " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-shot spatio-temporal action localization via spatial-aware "
                 "object embeddings"};
    app.require_subcommand(1);

    // mine-priors
    auto* mine = app.add_subcommand("mine-priors", "Mine relation priors from annotations");
    std::string annotations_dir, priors_out;
    double closeness = 2.0;
    int mine_grid = 3;
    mine->add_option("--annotations", annotations_dir, "Annotation corpus directory")
        ->required();
    mine->add_option("--out", priors_out, "Output priors file")->required();
    mine->add_option("--closeness", closeness, "Closeness factor (actor diagonal multiple)");
    mine->add_option("--grid-size", mine_grid, "Relation grid size");

    CommonOptions loc_opt, cls_opt, ret_opt;
    std::string loc_actions, cls_actions;

    auto* localize = app.add_subcommand("localize", "Rank action tubes across the collection");
    add_common(localize, loc_opt);
    localize->add_option("--actions", loc_actions, "Comma-separated action names");

    auto* classifyc = app.add_subcommand("classify", "Zero-shot video classification");
    cls_opt.pipeline.scoring.local_top_k = 5;
    add_common(classifyc, cls_opt);
    classifyc->add_option("--actions", cls_actions, "Comma-separated action names");

    auto* retrievec = app.add_subcommand("retrieve", "Composite query retrieval");
    add_common(retrievec, ret_opt, /*needs_embeddings=*/false);
    retrievec->add_option("--embeddings", ret_opt.embeddings_path, "Word embedding file");
    std::string query_object, query_relation = "overlap", query_action;
    double query_size = 0.0;
    std::size_t query_top = 10;
    retrievec->add_option("--object", query_object, "Query object label")->required();
    retrievec->add_option("--relation", query_relation,
                          "Named cell, 9 reals, or 'prior'");
    retrievec->add_option("--size", query_size, "Target object/actor area ratio");
    retrievec->add_option("--action", query_action, "Action name for the global term");
    retrievec->add_option("--top", query_top, "Results to return");

    auto* evalc = app.add_subcommand("eval", "Evaluate saved tube rankings");
    std::string eval_tubes_dir, eval_gt, eval_out;
    saoe::EvalConfig eval_config;
    evalc->add_option("--tubes", eval_tubes_dir, "Directory with tubes_<action>.json files")
        ->required();
    evalc->add_option("--ground-truth", eval_gt, "Ground truth tubes file")->required();
    evalc->add_option("--thresholds", eval_config.iou_thresholds, "ST-IoU thresholds");
    evalc->add_option("--out", eval_out, "Report output file");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic detection corpus");
    std::string synth_spec, synth_out;
    synth->add_option("--spec", synth_spec, "Scene spec file")->required();
    synth->add_option("--out", synth_out, "Output corpus directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (mine->parsed()) return cmd_mine_priors(annotations_dir, priors_out, closeness,
                                                   mine_grid);
        if (localize->parsed()) return cmd_localize(loc_opt, loc_actions);
        if (classifyc->parsed()) return cmd_classify(cls_opt, cls_actions);
        if (retrievec->parsed())
            return cmd_retrieve(ret_opt, query_object, query_relation, query_size,
                                query_action, query_top);
        if (evalc->parsed()) return cmd_eval(eval_tubes_dir, eval_gt, eval_config, eval_out);
        if (synth->parsed()) return cmd_synth(synth_spec, synth_out);
    } catch (const saoe::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternalError;
    }
    return 0;
}
