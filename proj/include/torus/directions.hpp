// directions.hpp - estimating local direction sets from finite orbit samples:
// cluster the angles (mod pi) of sample offsets inside a small annulus around
// a rational anchor, then rationalize each cluster mean.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "torus/geometry.hpp"
#include "torus/orbit.hpp"

namespace torus {

struct DirCluster {
    double mean_angle = 0;  // in [0, pi)
    uint64_t weight = 0;
    std::optional<Direction> rational;  // empty = irrational verdict
};

struct DirectionEstimate {
    TorusPoint anchor;
    std::vector<DirCluster> clusters;  // sorted by mean angle
    double epsilon = 0;
    double theta_tol = 0;
};

// Samples with 0 < d(point, anchor) <= epsilon (certified bounds decide
// membership), angles taken mod pi, single-linkage clusters at threshold
// theta_tol on the circle of circumference pi. Empty annulus -> no clusters.
DirectionEstimate estimate_der(const TorusPoint& anchor,
                               const std::vector<OrbitSample>& samples, double epsilon,
                               double theta_tol, long rational_coeff_max = 100);

// estimate_der over every rational anchor with denominators <= q_max;
// only non-empty estimates are returned (anchor order: sorted by (x,y)).
std::vector<DirectionEstimate> estimate_der_q(const std::vector<OrbitSample>& samples,
                                              unsigned q_max, double epsilon,
                                              double theta_tol, int threads = 1,
                                              long rational_coeff_max = 100);

}  // namespace torus
