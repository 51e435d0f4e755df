#include "saoe/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "saoe/corpus.hpp"

namespace saoe {

EmbeddingStore load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    EmbeddingStore store;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string label;
        ss >> label;
        std::vector<double> vec;
        double v;
        while (ss >> v) vec.push_back(v);
        if (!ss.eof())
            throw InputError(path + ":" + std::to_string(line_no) + ": non-numeric component");
        if (vec.empty())
            throw InputError(path + ":" + std::to_string(line_no) + ": no vector components");
        if (store.dimension == 0)
            store.dimension = vec.size();
        else if (vec.size() != store.dimension)
            throw InputError(path + ":" + std::to_string(line_no) + ": dimension " +
                             std::to_string(vec.size()) + " != " +
                             std::to_string(store.dimension));
        if (!store.vectors.emplace(label, std::move(vec)).second)
            throw InputError(path + ":" + std::to_string(line_no) + ": duplicate label '" +
                             label + "'");
    }
    return store;
}

void save_embeddings(const EmbeddingStore& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out.precision(17);
    for (const auto& [label, vec] : store.vectors) {
        out << label;
        for (double v : vec) out << ' ' << v;
        out << '\n';
    }
}

namespace {

std::vector<std::string> tokenize(const std::string& phrase) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : phrase) {
        if (c == ' ' || c == '\t' || c == '_') {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

}  // namespace

std::vector<double> embed_phrase(const std::string& phrase, const EmbeddingStore& store) {
    const auto tokens = tokenize(phrase);
    if (tokens.empty()) throw InputError("empty phrase");
    std::vector<double> mean(store.dimension, 0.0);
    for (const auto& token : tokens) {
        auto it = store.vectors.find(token);
        if (it == store.vectors.end())
            throw InputError("out-of-vocabulary token '" + token + "' in phrase '" + phrase + "'");
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += it->second[i];
    }
    for (double& v : mean) v /= static_cast<double>(tokens.size());
    return mean;
}

double similarity(const std::string& object_name, const std::string& action_name,
                  const EmbeddingStore& store) {
    const auto a = embed_phrase(object_name, store);
    const auto b = embed_phrase(action_name, store);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0)
        throw InputError("zero-norm phrase vector for '" +
                         (na == 0.0 ? object_name : action_name) + "'");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

RelevanceList select_top_objects(const std::string& action,
                                 const std::vector<std::string>& candidate_labels,
                                 const EmbeddingStore& store, std::size_t k) {
    if (k > candidate_labels.size())
        throw InputError("top-k " + std::to_string(k) + " exceeds " +
                         std::to_string(candidate_labels.size()) + " candidates");
    RelevanceList list;
    list.action = action;
    list.entries.reserve(candidate_labels.size());
    for (const auto& label : candidate_labels)
        list.entries.push_back({label, similarity(label, action, store)});
    std::sort(list.entries.begin(), list.entries.end(),
              [](const RelevanceEntry& a, const RelevanceEntry& b) {
                  if (a.weight != b.weight) return a.weight > b.weight;
                  return a.label < b.label;
              });
    list.entries.resize(k);
    return list;
}

}  // namespace saoe
