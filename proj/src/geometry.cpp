#include "torus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace torus {

Direction make_direction(long p, long q) {
    if (p == 0 && q == 0) throw precondition_error("Direction: zero vector");
    long g = std::gcd(std::abs(p), std::abs(q));
    p /= g;
    q /= g;
    if (p < 0 || (p == 0 && q < 0)) {
        p = -p;
        q = -q;
    }
    return Direction{p, q};
}

double ang_dist(const Direction& d, double vx, double vy) {
    double cross = std::abs(static_cast<double>(d.p) * vy - static_cast<double>(d.q) * vx);
    double norm = std::hypot(static_cast<double>(d.p), static_cast<double>(d.q)) *
                  std::hypot(vx, vy);
    if (norm == 0) throw precondition_error("ang_dist: zero vector");
    return std::asin(std::min(1.0, cross / norm));
}

UniMatrix make_unimatrix(long m11, long m12, long m21, long m22) {
    if (m11 * m22 - m12 * m21 != 1)
        throw precondition_error("UniMatrix: determinant must be +1");
    return UniMatrix{m11, m12, m21, m22};
}

namespace {

// extended gcd: a*x + b*y = g, standard iteration
void ext_gcd(long a, long b, long& g, long& x, long& y) {
    long old_r = a, r = b;
    long old_s = 1, s = 0;
    long old_t = 0, t = 1;
    while (r != 0) {
        long q = old_r / r;
        long tmp;
        tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
        tmp = old_t - q * t; old_t = t; t = tmp;
    }
    g = old_r;
    x = old_s;
    y = old_t;
    if (g < 0) { g = -g; x = -x; y = -y; }
}

}  // namespace

UniMatrix direction_to_horizontal(const Direction& t) {
    long g, u, v;
    ext_gcd(t.p, t.q, g, u, v);
    // g == 1 by the primitivity invariant
    return make_unimatrix(u, v, -t.q, t.p);
}

namespace {

// k*value mod 1 for any integer k (internal; the public mul_int requires k >= 1)
TorusValue scale_any(const TorusValue& v, const BigInt& k) {
    if (is_exact(v)) return Rat(BigRat(std::get<Rat>(v).value() * BigRat(k)));
    const auto& f = std::get<FixedReal>(v);
    BigInt m = f.mantissa() * k;
    mpz_fdiv_r(m.get_mpz_t(), m.get_mpz_t(), pow2(f.bits()).get_mpz_t());
    return FixedReal(m, f.bits(), f.err_mult() * abs(k));
}

TorusValue add_values(const TorusValue& a, const TorusValue& b) {
    if (is_exact(a)) return std::get<Rat>(a).add(std::get<Rat>(b));
    return std::get<FixedReal>(a).add(std::get<FixedReal>(b));
}

}  // namespace

TorusPoint apply_matrix(const UniMatrix& l, const TorusPoint& a) {
    TorusValue nx = add_values(scale_any(a.x, BigInt(l.m11)), scale_any(a.y, BigInt(l.m12)));
    TorusValue ny = add_values(scale_any(a.x, BigInt(l.m21)), scale_any(a.y, BigInt(l.m22)));
    return TorusPoint(std::move(nx), std::move(ny));
}

RationalLine make_line(long a, long b, Rat c) {
    if (a == 0 && b == 0) throw precondition_error("RationalLine: (a,b) must be nonzero");
    if (std::gcd(std::abs(a), std::abs(b)) != 1)
        throw precondition_error("RationalLine: gcd(a,b) must be 1");
    return RationalLine{a, b, std::move(c)};
}

bool line_contains(const RationalLine& l, const TorusPoint& pt, const BigRat& tol) {
    CertScalar s = linear_form(BigInt(l.a), pt.x, BigInt(l.b), pt.y);
    if (tol < s.err) throw precondition_error("line_contains: tol below certified error");
    s.center -= l.c.value();
    RatInterval d = dist_to_int(s);
    return d.hi <= tol;
}

double covering_radius(const Direction& t) {
    double n = std::hypot(static_cast<double>(t.p), static_cast<double>(t.q));
    return 0.5 / n;
}

// ---------------------------------------------------------------------------
// rationalize_slope. The tolerance ball around v either contains one of the
// four size-1 directions (octant boundaries) or lies strictly inside one open
// octant; inside an octant the answer is the unique smallest-denominator
// fraction in a slope interval, found by a batched Stern-Brocot descent
// (equivalently, by continued-fraction convergent steps).

SlopeVerdict rationalize_slope(double vx, double vy, long max_coeff, double tol) {
    if (max_coeff < 1) throw precondition_error("rationalize_slope: max_coeff < 1");
    if (!(tol > 0) || tol >= M_PI / 8)
        throw precondition_error("rationalize_slope: tol must be in (0, pi/8)");
    double norm = std::hypot(vx, vy);
    if (norm < 0.5) throw precondition_error("rationalize_slope: vector is not near unit");
    vx /= norm;
    vy /= norm;
    if (vx < 0 || (vx == 0 && vy < 0)) {
        vx = -vx;
        vy = -vy;
    }

    const Direction boundary[] = {{1, 0}, {1, 1}, {0, 1}, {1, -1}};
    double best = tol;
    const Direction* best_dir = nullptr;
    for (const auto& d : boundary) {
        double ad = ang_dist(d, vx, vy);
        if (ad <= best) {
            best = ad;
            best_dir = &d;
        }
    }
    if (best_dir) return {true, *best_dir};

    // strictly inside one octant: reduce to a target g in (0,1); (num,den) of a
    // fraction approximating g maps back to the direction via `remap`
    double ax = vx, ay = std::abs(vy);
    bool neg = vy < 0;
    bool steep = ay > ax;
    double g = steep ? ax / ay : ay / ax;
    auto remap = [&](long num, long den) {
        long p = steep ? num : den;
        long q = steep ? den : num;
        return make_direction(p, neg ? -q : q);
    };
    double theta = std::atan(g);  // in (0, pi/4), ball inside the octant
    double g_lo = std::tan(theta - tol);
    double g_hi = std::tan(theta + tol);

    long lon = 0, lod = 1;  // lo = 0/1
    long hin = 1, hid = 1;  // hi = 1/1
    for (int iter = 0; iter < 4096; ++iter) {
        long mn = lon + hin, md = lod + hid;
        if (md > max_coeff) return {false, {}};
        double m = static_cast<double>(mn) / static_cast<double>(md);
        // batch steps may overshoot the coefficient bound; clamping just past it
        // keeps the arithmetic in range and the next mediant check bails out
        if (m < g_lo) {
            // step toward hi: lo += k*hi, staying below g_lo
            double denom = static_cast<double>(hin) - g_lo * static_cast<double>(hid);
            long k = 1;
            if (denom > 0) {
                double kf = (g_lo * static_cast<double>(lod) - static_cast<double>(lon)) / denom;
                k = std::max(1L, static_cast<long>(std::min(kf, 1e17)));
            }
            k = std::min(k, (max_coeff - lod) / hid + 1);
            k = std::max(k, 1L);
            while (k > 1 && (lon + k * hin) >= g_lo * (lod + k * hid)) --k;
            lon += k * hin;
            lod += k * hid;
        } else if (m > g_hi) {
            double denom = g_hi * static_cast<double>(lod) - static_cast<double>(lon);
            long k = 1;
            if (denom > 0) {
                double kf = (static_cast<double>(hin) - g_hi * static_cast<double>(hid)) / denom;
                k = std::max(1L, static_cast<long>(std::min(kf, 1e17)));
            }
            k = std::min(k, (max_coeff - hid) / lod + 1);
            k = std::max(k, 1L);
            while (k > 1 && (hin + k * lon) <= g_hi * (hid + k * lod)) --k;
            hin += k * lon;
            hid += k * lod;
        } else {
            Direction d = remap(mn, md);
            if (std::max(std::abs(d.p), std::abs(d.q)) > max_coeff) return {false, {}};
            if (ang_dist(d, vx, vy) > tol) return {false, {}};
            return {true, d};
        }
    }
    return {false, {}};
}

}  // namespace torus
