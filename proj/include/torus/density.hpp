// density.hpp - grid occupancy and covering-radius statistics over orbit
// samples, plus the simultaneous-approximation experiments (best approach to a
// target, Littlewood-style weighted products).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torus/arith.hpp"
#include "torus/orbit.hpp"

namespace torus {

struct GridStats {
    unsigned g = 0;
    uint64_t total = 0;
    std::vector<uint32_t> hist;  // row-major, index = cell_y * g + cell_x
    uint64_t empty_cells = 0;
    double coverage = 0;       // 1 - empty/g^2
    double max_deviation = 0;  // max over cells of |count/total - 1/g^2|
};

// Histogram over the uniform g x g grid of [0,1)^2 with floor cell assignment.
// Requires every sample's certified error < 1/(4g).
GridStats grid_coverage(const std::vector<OrbitSample>& samples, unsigned g,
                        int threads = 1);

// Certified upper bound on the covering radius of the sample set: max over
// grid centers of the distance to the nearest sample, plus the cell diagonal.
double covering_radius_estimate(const std::vector<OrbitSample>& samples, unsigned g,
                                int threads = 1);

struct ApproxRecord {
    BigRat best;        // center value of max(dist(Sx - alpha), dist(Sy - beta))
    BigRat best_err;    // certification radius at the argmin
    ExpVec argmin;
    BigInt s_max;
};

struct ApproxImprovement {
    ExpVec triple;
    BigRat best;
};

// Minimum over the enumerated semigroup of max coordinate distance to the
// target, ties broken by enumeration order. `trace` (optional) receives every
// running improvement.
ApproxRecord best_approx(const TorusPoint& start, const TorusPoint& target,
                         const GeneratorSet& g, const BigInt& s_max, int threads = 1,
                         std::vector<ApproxImprovement>* trace = nullptr);

enum class WeightFn { log_product, constant_one };

struct LittlewoodRecord {
    ExpVec triple;
    double weight = 0;
    double dist_x = 0, dist_y = 0;
    double product = 0;
    bool included = false;  // all exponents positive (the headline liminf proxy)
    double running_min = 0; // over included records so far; +inf before the first
};

std::vector<LittlewoodRecord> littlewood_track(const TorusPoint& start,
                                               const GeneratorSet& g,
                                               const BigInt& s_max, WeightFn f);

}  // namespace torus
