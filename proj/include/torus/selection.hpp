// selection.hpp - the {2,3,5} pair-selection rule: given a rational r outside
// Z/N, pick two generators a,b whose mixed powers never carry r into Z/N.
#pragma once

#include "torus/arith.hpp"

namespace torus {

struct SelectionResult {
    int a = 0, b = 0;  // distinct elements of {2,3,5}
    // lcm(q,N)/N = 2^k2 * 3^k3 * 5^k5 * Q with gcd(Q,30) = 1
    unsigned long k2 = 0, k3 = 0, k5 = 0;
    BigInt big_q;
};

// Case order is fixed: k2>0 -> (3,5); else k3>0 -> (2,5); else k5>0 -> (2,3);
// else Q>1 -> (2,3). r in Z/N (equivalently den(r) | N) violates the
// precondition.
SelectionResult select_pair(const Rat& r, const BigInt& n);

// select_pair with N = 1; requires r != 0.
SelectionResult select_pair_nonvanishing(const Rat& r);

// Exact check that a^m b^n r is outside Z/N for all 0 <= m,n <= bound.
bool verify_pair(const Rat& r, const BigInt& n, int a, int b, unsigned bound);

}  // namespace torus
