// geometry.hpp - primitive directions, rational lines on the torus, and SL2(Z)
// coordinate changes.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "torus/arith.hpp"

namespace torus {

// Primitive integer vector on the projective line: gcd(p,q) = 1 and either
// p > 0 or (p = 0, q = 1).
struct Direction {
    long p = 1, q = 0;  // (dx, dy)
};

Direction make_direction(long p, long q);  // normalizes sign and gcd

// Unoriented angular distance (radians, in [0, pi/2]) between a direction and
// a vector.
double ang_dist(const Direction& d, double vx, double vy);

struct UniMatrix {
    long m11 = 1, m12 = 0, m21 = 0, m22 = 1;
};

UniMatrix make_unimatrix(long m11, long m12, long m21, long m22);  // det must be +1

// L with L*(p,q)^T = (1,0)^T and det L = 1, built from an extended gcd.
UniMatrix direction_to_horizontal(const Direction& t);

// Matrix-vector product mod 1; each output coordinate's error multiplier grows
// by |row| entries.
TorusPoint apply_matrix(const UniMatrix& l, const TorusPoint& a);

// {(x,y) : a x + b y = c mod 1} with gcd(a,b) = 1 and c in [0,1).
struct RationalLine {
    long a, b;
    Rat c;
    bool homogeneous() const { return c.is_zero(); }
    Direction direction() const { return make_direction(b, -a); }
};

RationalLine make_line(long a, long b, Rat c);

bool line_contains(const RationalLine& l, const TorusPoint& pt, const BigRat& tol);

// Exact covering radius 1/(2 sqrt(p^2+q^2)) of the homogeneous line with
// direction t on the torus (half the spacing of the parallel family).
double covering_radius(const Direction& t);

struct SlopeVerdict {
    bool rational = false;
    Direction dir;
};

// Smallest-denominator direction (max(|p|,|q|) <= max_coeff) within angular
// tolerance of the unit vector v, found by a Stern-Brocot walk; irrational
// verdict when none qualifies. tol must be < pi/8.
SlopeVerdict rationalize_slope(double vx, double vy, long max_coeff, double tol);

}  // namespace torus
