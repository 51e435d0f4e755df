#pragma once

#include <map>
#include <string>
#include <vector>

namespace saoe {

/// Label -> D-dimensional word vector, all vectors the same dimension.
struct EmbeddingStore {
    std::size_t dimension = 0;
    std::map<std::string, std::vector<double>> vectors;

    bool contains(const std::string& label) const { return vectors.count(label) > 0; }
};

struct RelevanceEntry {
    std::string label;
    double weight = 0.0;  // cosine similarity, in [-1,1]
};

/// Objects ranked by semantic relevance to one action, weight descending,
/// ties broken lexicographically by label.
struct RelevanceList {
    std::string action;
    std::vector<RelevanceEntry> entries;

    RelevanceList truncated(std::size_t k) const {
        RelevanceList out{action, entries};
        if (out.entries.size() > k) out.entries.resize(k);
        return out;
    }
};

EmbeddingStore load_embeddings(const std::string& path);
void save_embeddings(const EmbeddingStore& store, const std::string& path);

// Splits on whitespace/underscores, lowercases, averages the token vectors.
// Throws InputError naming the first out-of-vocabulary token.
std::vector<double> embed_phrase(const std::string& phrase, const EmbeddingStore& store);

// cos(e(object_name), e(action_name)); throws on OOV or zero-norm phrase vector.
double similarity(const std::string& object_name, const std::string& action_name,
                  const EmbeddingStore& store);

RelevanceList select_top_objects(const std::string& action,
                                 const std::vector<std::string>& candidate_labels,
                                 const EmbeddingStore& store, std::size_t k);

}  // namespace saoe
