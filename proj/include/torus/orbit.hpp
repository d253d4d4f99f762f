// orbit.hpp - orbit generation under multiplicative semigroup actions, exact
// closures of rational starts, rational-relation search, and the orbit-closure
// classification (finite set / union of lines / dense).
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "torus/arith.hpp"
#include "torus/smooth.hpp"

namespace torus {

struct OrbitSample {
    ExpVec triple;
    TorusPoint point;
};

// One sample per exponent vector with multiplier <= s_max, ordered like
// enumerate_smooth. Every point is multiplier * start computed directly from
// the start (error multiplier = multiplier for the fixed backend).
std::vector<OrbitSample> enumerate_orbit(const TorusPoint& start, const GeneratorSet& g,
                                         const BigInt& s_max, int threads = 1);

// Samples with duplicate points removed (first occurrence kept).
std::vector<OrbitSample> distinct_samples(std::vector<OrbitSample> samples);

// Exact finite closure of a rational start under the generator maps (BFS;
// denominators never grow). Result sorted by (x, y).
std::vector<TorusPoint> rational_closure(const TorusPoint& start, const GeneratorSet& g);

// m x + n y = k with gcd(m,n,k) = 1, (m,n) != (0,0).
struct Relation {
    long m = 0, n = 0;
    BigInt k;
};

// Relation minimizing max(|m|,|n|) (ties: smallest |k|, then the canonical
// sign m > 0 or (m = 0, n > 0)) with residual |m x + n y - k| <= tau over
// |m|,|n| <= c_bound; nullopt when no candidate exists.
std::optional<Relation> find_relation(const TorusValue& x, const TorusValue& y,
                                      long c_bound, const BigRat& tau);

enum class Certainty { exact, bounded_search };

struct FiniteClass {
    std::vector<TorusPoint> points;
};
struct LineUnionClass {
    Relation relation;
    Certainty certainty;
};
struct DenseClass {
    Certainty certainty;
};
using ClosureClass = std::variant<FiniteClass, LineUnionClass, DenseClass>;

// Trichotomy: Finite for rational points (exact), LineUnion when a relation is
// found, Dense otherwise. Dense is always a bounded-search verdict: no finite
// computation certifies the absence of every relation.
ClosureClass classify(const TorusPoint& start, const GeneratorSet& g, long c_bound,
                      const BigRat& tau);

// Default relation tolerance for classify/find_relation on a given point:
// 0 for exact points, else 2 * c_bound * (max coordinate error bound).
BigRat relation_tolerance(const TorusPoint& start, long c_bound);

// Decrement the first positive exponent (generator order, i.e. k2 before k3
// before k5 for the default set). The zero vector is outside the domain.
ExpVec pre_image(const ExpVec& t, const GeneratorSet& g);

}  // namespace torus
