#pragma once

#include <map>
#include <string>
#include <vector>

#include "saoe/corpus.hpp"
#include "saoe/geometry.hpp"

namespace saoe {

// Canonical 3x3 cell order (row-major, y grows downward so row 0 is "above"):
// [above-left, above, above-right, left, overlap, right, below-left, below, below-right]
enum RelationCell : int {
    kAboveLeft = 0,
    kAbove = 1,
    kAboveRight = 2,
    kLeft = 3,
    kOverlap = 4,
    kRight = 5,
    kBelowLeft = 6,
    kBelow = 7,
    kBelowRight = 8,
};

/// Probability distribution over relative actor/object positions.
/// 9 cells for the default 3x3 grid; n^2 cells for an n x n grid.
struct RelationDistribution {
    std::vector<double> cells;

    RelationDistribution() : cells(9, 0.0) {}
    explicit RelationDistribution(std::vector<double> c) : cells(std::move(c)) {}

    static RelationDistribution uniform(std::size_t n_cells = 9);
    static RelationDistribution point_mass(std::size_t cell, std::size_t n_cells = 9);

    double sum() const;
    bool valid(double tol = 1e-9) const;
};

struct RelationGridConfig {
    int grid_size = 3;        // odd, >= 3; center (grid_size-2)^2 cells subdivide the actor box
    bool area_mode = true;    // false: assign the whole object box by its center point
};

// Partition the plane by extending the actor box edges (plus interior
// subdivisions for grids finer than 3x3) and return the fraction of the
// object box area in each region. Zero-area object boxes contribute a point
// mass at the cell containing their center; boundary centers resolve toward
// the overlap cell, then toward the smaller cell index.
RelationDistribution relation_distribution(const Box& actor, const Box& object,
                                           const RelationGridConfig& grid = {});

// Jensen-Shannon divergence with base-2 logarithm, in [0,1]. 0*log0 := 0.
double jsd2(const RelationDistribution& p, const RelationDistribution& q);

// 1 - jsd2(prior, observed); 1 means perfect spatial agreement.
double relation_match(const RelationDistribution& prior, const RelationDistribution& observed);

struct PriorMiningConfig {
    // Max center distance, as a multiple of the actor diagonal, for an
    // actor-object pair to count toward the prior.
    double closeness_factor = 2.0;
    RelationGridConfig grid;
};

// Mine per-label relation priors from an annotation corpus (same schema as
// detections). Each object instance pairs with its closest actor when that
// actor is within the closeness threshold; per-label prior is the mean of
// the per-instance distributions. Labels with no qualifying instance get the
// uniform distribution.
std::map<std::string, RelationDistribution> mine_priors(
    const std::vector<VideoDetections>& annotations, const PriorMiningConfig& config = {});

std::map<std::string, RelationDistribution> load_priors(const std::string& path);
void save_priors(const std::map<std::string, RelationDistribution>& priors,
                 const std::string& path);

// Named cell -> point mass ("on" aliases the overlap cell). Throws InputError
// on unknown names.
RelationDistribution named_relation(const std::string& name);

}  // namespace saoe
