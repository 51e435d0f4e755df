#pragma once

#include <map>
#include <string>
#include <vector>

#include "saoe/corpus.hpp"
#include "saoe/embedding.hpp"
#include "saoe/linking.hpp"

namespace saoe {

struct RankedTube {
    Tube tube;
    double combined_score = 0.0;  // embedding score + per-video global score
};

// Linear combination of embedding similarity and classifier probability over
// the top relevant global objects. Labels absent from the video's score map
// contribute 0; negative-weight objects are skipped.
double global_score(const std::string& video_id, const GlobalScores& globals,
                    const RelevanceList& relevance);

// Keep the top tubes per video by combined score, then rank all kept tubes
// across videos, score descending, ties by (video_id, tube position).
std::vector<RankedTube> rank_localizations(const std::vector<Tube>& tubes,
                                           const GlobalScores& globals,
                                           const RelevanceList& relevance,
                                           std::size_t top_per_video);

struct Classification {
    std::string predicted;
    std::map<std::string, double> scores;  // per-action combined score
};

// Max-pool tube embedding scores per action, add the global term, predict the
// argmax action (ties lexicographic). Actions with no tubes max-pool to 0.
Classification classify(const std::string& video_id,
                        const std::map<std::string, std::vector<Tube>>& tubes_per_action,
                        const GlobalScores& globals,
                        const std::map<std::string, RelevanceList>& relevances);

void save_ranked_tubes(const std::vector<RankedTube>& tubes, const std::string& path);
std::vector<RankedTube> load_ranked_tubes(const std::string& path);

void save_classifications(const std::map<std::string, Classification>& results,
                          const std::string& path);

}  // namespace saoe
