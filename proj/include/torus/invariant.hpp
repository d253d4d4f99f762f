// invariant.hpp - the rhombus chain E along the vertical axis, its pre-image
// property, linear form systems, and pre-image tracking traces.
//
// Membership in E is the closed form dist(x) <= (2 delta / N) * dist(N y)
// where dist is the distance to the nearest integer: a rhombus of height 1/N
// and maximal half-width delta/N sits on each segment [j/N, (j+1)/N] of the
// vertical axis.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "torus/arith.hpp"
#include "torus/geometry.hpp"
#include "torus/orbit.hpp"

namespace torus {

class RhombusSet {
  public:
    // Canonical construction keeps the working bound delta < 1/10000 (the
    // pre-image property needs far less, but the strict bound is the contract).
    RhombusSet(Rat delta, unsigned n);
    // Visualization-scale construction (delta < 1/10, still safe for PP).
    static RhombusSet for_visualization(Rat delta, unsigned n);

    const Rat& delta() const { return delta_; }
    unsigned n() const { return n_; }

  private:
    RhombusSet(Rat delta, unsigned n, bool vis);
    Rat delta_;
    unsigned n_;
};

enum class Membership { in, out, boundary };  // boundary only for fixed points

Membership in_rhombus_set(const RhombusSet& e, const TorusPoint& a);

struct PpCounterexample {
    uint64_t index;
    Rat x, y;
    int generator;
};

struct PpReport {
    uint64_t requested = 0;
    uint64_t skipped_in_e = 0;  // sampled points already in E (PP premise fails)
    uint64_t checked = 0;
    uint64_t violations = 0;
    uint64_t seed = 0;
    std::optional<PpCounterexample> counterexample;  // smallest violating index
};

// Draws `samples` rational points with dist(x) <= delta (numerators from a
// seeded 64-bit mixer, denominator 2^64), keeps those outside E, and checks
// that the 2x, 3x and 5x images stay outside E. Exact arithmetic; the closed
// form predicts zero violations at any sample count.
PpReport check_preimage_property(const RhombusSet& e, uint64_t samples, uint64_t seed,
                                 int threads = 1);

// Slow exact reference of the sampling loop above (general rationals, no
// word-size shortcuts); used to validate the parallel kernel.
PpReport check_preimage_property_reference(const RhombusSet& e, uint64_t samples,
                                           uint64_t seed);

struct TrackStep {
    ExpVec triple;
    TorusPoint point;
    Membership in_e;
    RatInterval dist_l0;          // distance to the vertical axis = dist(x)
    std::optional<bool> halved;   // dist(next) <= dist(this)/2; empty on the last step
};

// Walks the exponent vector of `sample` down to zero, recomputing the point
// from `start` at every step. The first entry is the sample itself, the last
// is the start point.
std::vector<TrackStep> track_preimages(const TorusPoint& start, const OrbitSample& sample,
                                       const RhombusSet& e, const GeneratorSet& g);

// Homogeneous lines including the vertical axis as lines[0] = (1,0;0).
struct LinearFormSystem {
    std::vector<RationalLine> lines;
    explicit LinearFormSystem(std::vector<RationalLine> ls);
};

// All rational points with both denominators <= q_max lying on some line of
// the system, sorted by (x, y).
std::vector<TorusPoint> rational_points_on_system(const LinearFormSystem& s,
                                                  unsigned q_max);

uint64_t mix64(uint64_t seed, uint64_t index);  // counter-based splitmix64 stream

}  // namespace torus
