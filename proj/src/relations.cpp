#include "saoe/relations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace saoe {

using nlohmann::json;

RelationDistribution RelationDistribution::uniform(std::size_t n_cells) {
    RelationDistribution d{std::vector<double>(n_cells, 1.0 / static_cast<double>(n_cells))};
    return d;
}

RelationDistribution RelationDistribution::point_mass(std::size_t cell, std::size_t n_cells) {
    RelationDistribution d{std::vector<double>(n_cells, 0.0)};
    d.cells.at(cell) = 1.0;
    return d;
}

double RelationDistribution::sum() const {
    double s = 0.0;
    for (double c : cells) s += c;
    return s;
}

bool RelationDistribution::valid(double tol) const {
    for (double c : cells)
        if (!(c >= 0.0) || !std::isfinite(c)) return false;
    return std::abs(sum() - 1.0) <= tol;
}

namespace {

// Finite grid boundaries along one axis: the actor edge pair plus equal
// interior subdivisions for grids finer than 3x3. n intervals total, the
// outer two unbounded.
std::vector<double> axis_boundaries(double lo, double hi, int grid_size) {
    const int inner = grid_size - 2;  // intervals inside [lo, hi]
    std::vector<double> b;
    b.reserve(static_cast<std::size_t>(grid_size) - 1);
    b.push_back(lo);
    for (int i = 1; i < inner; ++i)
        b.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(inner));
    b.push_back(hi);
    return b;
}

double interval_overlap(double a1, double a2, double b1, double b2) {
    return std::max(0.0, std::min(a2, b2) - std::max(a1, b1));
}

// Intervals of a partitioned axis that contain v; boundary values belong to
// both adjacent intervals.
std::vector<int> containing_intervals(double v, const std::vector<double>& b) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<int> out;
    const int n = static_cast<int>(b.size()) + 1;
    for (int i = 0; i < n; ++i) {
        const double lo = (i == 0) ? -inf : b[static_cast<std::size_t>(i) - 1];
        const double hi = (i == n - 1) ? inf : b[static_cast<std::size_t>(i)];
        if (v >= lo && v <= hi) out.push_back(i);
    }
    return out;
}

}  // namespace

RelationDistribution relation_distribution(const Box& actor, const Box& object,
                                           const RelationGridConfig& grid) {
    if (!actor.positive_area()) throw InputError("actor box has zero area");
    if (grid.grid_size < 3 || grid.grid_size % 2 == 0)
        throw InputError("grid size must be odd and >= 3");
    const int n = grid.grid_size;
    const auto bx = axis_boundaries(actor.x1, actor.x2, n);
    const auto by = axis_boundaries(actor.y1, actor.y2, n);
    RelationDistribution dist{std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};

    const bool point_object = !(object.x1 < object.x2 && object.y1 < object.y2);
    if (grid.area_mode && !point_object) {
        const double inf = std::numeric_limits<double>::infinity();
        const double area = object.area();
        for (int r = 0; r < n; ++r) {
            const double ylo = (r == 0) ? -inf : by[static_cast<std::size_t>(r) - 1];
            const double yhi = (r == n - 1) ? inf : by[static_cast<std::size_t>(r)];
            const double oy = interval_overlap(object.y1, object.y2, ylo, yhi);
            if (oy == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                const double xlo = (c == 0) ? -inf : bx[static_cast<std::size_t>(c) - 1];
                const double xhi = (c == n - 1) ? inf : bx[static_cast<std::size_t>(c)];
                const double ox = interval_overlap(object.x1, object.x2, xlo, xhi);
                if (ox > 0.0)
                    dist.cells[static_cast<std::size_t>(r) * n + c] = ox * oy / area;
            }
        }
        return dist;
    }

    // Point assignment by object center; boundary centers resolve toward the
    // actor-box (overlap) cells, then toward the smaller cell index.
    const auto cols = containing_intervals(object.cx(), bx);
    const auto rows = containing_intervals(object.cy(), by);
    int chosen = -1;
    for (int r : rows)
        for (int c : cols) {
            const bool interior = r > 0 && r < n - 1 && c > 0 && c < n - 1;
            const int cell = r * n + c;
            if (interior) {
                if (chosen < 0 || cell < chosen) chosen = cell;
            }
        }
    if (chosen < 0) {
        for (int r : rows)
            for (int c : cols) {
                const int cell = r * n + c;
                if (chosen < 0 || cell < chosen) chosen = cell;
            }
    }
    dist.cells[static_cast<std::size_t>(chosen)] = 1.0;
    return dist;
}

double jsd2(const RelationDistribution& p, const RelationDistribution& q) {
    if (p.cells.size() != q.cells.size())
        throw InputError("distribution size mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.cells.size(); ++i) {
        const double pi = p.cells[i];
        const double qi = q.cells[i];
        const double mi = 0.5 * (pi + qi);
        if (pi > 0.0) d += 0.5 * pi * std::log2(pi / mi);
        if (qi > 0.0) d += 0.5 * qi * std::log2(qi / mi);
    }
    return std::clamp(d, 0.0, 1.0);
}

double relation_match(const RelationDistribution& prior, const RelationDistribution& observed) {
    return 1.0 - jsd2(prior, observed);
}

std::map<std::string, RelationDistribution> mine_priors(
    const std::vector<VideoDetections>& annotations, const PriorMiningConfig& config) {
    const std::size_t n_cells =
        static_cast<std::size_t>(config.grid.grid_size) * config.grid.grid_size;
    std::map<std::string, std::pair<std::vector<double>, std::size_t>> acc;
    for (const auto& video : annotations) {
        for (const auto& frame : video.frames) {
            for (const auto& object : frame.objects) {
                acc.try_emplace(object.label, std::vector<double>(n_cells, 0.0), 0);
                const Detection* closest = nullptr;
                double best = std::numeric_limits<double>::infinity();
                for (const auto& actor : frame.actors) {
                    const double d = std::hypot(actor.box.cx() - object.box.cx(),
                                                actor.box.cy() - object.box.cy());
                    if (d < best) {
                        best = d;
                        closest = &actor;
                    }
                }
                if (!closest || best > config.closeness_factor * closest->box.diagonal())
                    continue;
                const auto dist =
                    relation_distribution(closest->box, object.box, config.grid);
                auto& [sum, count] = acc[object.label];
                for (std::size_t i = 0; i < n_cells; ++i) sum[i] += dist.cells[i];
                ++count;
            }
        }
    }
    std::map<std::string, RelationDistribution> priors;
    for (auto& [label, entry] : acc) {
        auto& [sum, count] = entry;
        if (count == 0) {
            priors.emplace(label, RelationDistribution::uniform(n_cells));
        } else {
            for (double& v : sum) v /= static_cast<double>(count);
            priors.emplace(label, RelationDistribution{std::move(sum)});
        }
    }
    return priors;
}

std::map<std::string, RelationDistribution> load_priors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    if (!doc.is_object()) throw InputError(path + ": expected an object keyed by label");
    std::map<std::string, RelationDistribution> priors;
    std::size_t arity = 0;
    for (const auto& [label, jcells] : doc.items()) {
        if (!jcells.is_array())
            throw InputError(path + ": " + label + ": expected an array of cells");
        if (arity == 0) {
            arity = jcells.size();
            const auto root = static_cast<std::size_t>(std::lround(std::sqrt(
                static_cast<double>(arity))));
            if (arity < 9 || root * root != arity)
                throw InputError(path + ": " + label + ": wrong arity " +
                                 std::to_string(jcells.size()));
        } else if (jcells.size() != arity) {
            throw InputError(path + ": " + label + ": wrong arity " +
                             std::to_string(jcells.size()));
        }
        std::vector<double> cells;
        cells.reserve(arity);
        for (const auto& c : jcells) {
            const double v = c.get<double>();
            if (v < 0.0) throw InputError(path + ": " + label + ": negative mass");
            cells.push_back(v);
        }
        double s = 0.0;
        for (double v : cells) s += v;
        if (std::abs(s - 1.0) > 1e-6)
            throw InputError(path + ": " + label + ": cells sum to " + std::to_string(s));
        for (double& v : cells) v /= s;
        priors.emplace(label, RelationDistribution{std::move(cells)});
    }
    return priors;
}

void save_priors(const std::map<std::string, RelationDistribution>& priors,
                 const std::string& path) {
    json doc = json::object();
    for (const auto& [label, dist] : priors) doc[label] = dist.cells;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

RelationDistribution named_relation(const std::string& name) {
    static const std::map<std::string, int> cells = {
        {"above-left", kAboveLeft},   {"above", kAbove},       {"above-right", kAboveRight},
        {"left", kLeft},              {"overlap", kOverlap},   {"on", kOverlap},
        {"in-front-of", kOverlap},    {"right", kRight},       {"below-left", kBelowLeft},
        {"below", kBelow},            {"below-right", kBelowRight},
    };
    auto it = cells.find(name);
    if (it == cells.end()) throw InputError("unknown relation cell '" + name + "'");
    return RelationDistribution::point_mass(static_cast<std::size_t>(it->second));
}

}  // namespace saoe
