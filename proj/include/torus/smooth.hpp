// smooth.hpp - ordered enumeration of the multiplicative semigroup generated by a
// set of integers >= 2, and the gap function of its logarithm set (how "eventually
// dense" the semigroup is on a unit window of the log line).
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "torus/arith.hpp"

namespace torus {

struct GeneratorSet {
    std::vector<unsigned long> gens;  // pairwise distinct, each >= 2; order preserved

    explicit GeneratorSet(std::vector<unsigned long> g);
    static GeneratorSet default235() { return GeneratorSet({2, 3, 5}); }
    size_t size() const { return gens.size(); }
    bool is235() const { return gens == std::vector<unsigned long>{2, 3, 5}; }
};

// Exponent vector with its exact multiplier prod gens[i]^e[i].
struct ExpVec {
    std::vector<unsigned> e;
    BigInt multiplier;

    unsigned long sum() const;
    bool is_zero() const { return sum() == 0; }
};

bool lex_less(const std::vector<unsigned>& a, const std::vector<unsigned>& b);

// All exponent vectors with multiplier <= s_max, ordered by multiplier and then
// lexicographically by exponents (ties occur only for non-coprime generator sets).
std::vector<ExpVec> enumerate_smooth(const GeneratorSet& g, const BigInt& s_max);

// ---------------------------------------------------------------------------
// Fixed-point natural logs, scale 2^prec. |result/2^prec - ln n| <= 2*(log2(n)+1) ulp.
BigInt fixed_log(unsigned long n, int prec);

constexpr int kLogPrecision = 96;

struct GapReport {
    double M = 0;
    uint64_t count = 0;   // semigroup log-points inside [M, M+1]
    double max_gap = 1;   // capped at the window length 1
    std::vector<unsigned long> generators;
};

// Largest difference between consecutive points of {sum k_i log g_i} over all
// gaps that touch the window [M, M+1]; a gap spanning a window edge counts at
// full length, and the result is capped at 1. An empty window therefore
// reports exactly 1.
GapReport log_gap(double M, const GeneratorSet& g, double horizon);

// Smallest integer M <= m_cap such that every window [M', M'+1], M <= M' <= m_cap,
// has max_gap <= delta; nullopt if no such M exists up to m_cap.
std::optional<double> density_threshold(double delta, const GeneratorSet& g, double m_cap);

}  // namespace torus
