// Serial runs are the reference; the OpenMP kernels must reproduce them
// bit for bit.
#include "doctest.h"
#include "torus/density.hpp"
#include "torus/directions.hpp"
#include "torus/invariant.hpp"
#include "torus/orbit.hpp"

using namespace torus;

namespace {
const GeneratorSet g235 = GeneratorSet::default235();

TorusPoint sqrt_start(int bits) {
    return TorusPoint(FixedReal::sqrt_frac(2, bits), FixedReal::sqrt_frac(3, bits));
}
}

TEST_CASE("orbit evaluation: parallel == serial") {
    int bits = choose_bits(BigInt(10000000), BigRat(1, BigInt("1000000000000")));
    TorusPoint start = sqrt_start(bits);
    auto serial = enumerate_orbit(start, g235, BigInt(10000000), 1);
    auto parallel = enumerate_orbit(start, g235, BigInt(10000000), 4);
    REQUIRE(serial.size() == parallel.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].triple.e == parallel[i].triple.e);
        CHECK(center(serial[i].point.x) == center(parallel[i].point.x));
        CHECK(center(serial[i].point.y) == center(parallel[i].point.y));
    }
}

TEST_CASE("grid histogram: parallel == serial") {
    int bits = choose_bits(BigInt(10000000), BigRat(1, BigInt("1000000000000")));
    auto samples = enumerate_orbit(sqrt_start(bits), g235, BigInt(10000000), 2);
    GridStats a = grid_coverage(samples, 32, 1);
    GridStats b = grid_coverage(samples, 32, 4);
    CHECK(a.hist == b.hist);
    CHECK(a.coverage == b.coverage);
    CHECK(a.max_deviation == b.max_deviation);
}

TEST_CASE("covering radius estimate: parallel == serial") {
    int bits = choose_bits(BigInt(1000000), BigRat(1, BigInt("1000000000000")));
    auto samples = enumerate_orbit(sqrt_start(bits), g235, BigInt(1000000), 2);
    CHECK(covering_radius_estimate(samples, 32, 1) ==
          covering_radius_estimate(samples, 32, 4));
}

TEST_CASE("pp check: parallel == serial == exact reference") {
    RhombusSet e(Rat(BigInt(1), BigInt(100000)), 10);
    PpReport s = check_preimage_property(e, 30000, 7, 1);
    PpReport p = check_preimage_property(e, 30000, 7, 4);
    CHECK(s.skipped_in_e == p.skipped_in_e);
    CHECK(s.checked == p.checked);
    CHECK(s.violations == p.violations);
    PpReport ref = check_preimage_property_reference(e, 30000, 7);
    CHECK(s.skipped_in_e == ref.skipped_in_e);
    CHECK(s.violations == ref.violations);
}

TEST_CASE("best_approx: parallel == serial") {
    int bits = choose_bits(BigInt(1000000), BigRat(1, BigInt("1000000000000")));
    TorusPoint start = sqrt_start(bits);
    TorusPoint tgt(Rat(BigInt(1), BigInt(2)), Rat(BigInt(1), BigInt(2)));
    ApproxRecord a = best_approx(start, tgt, g235, BigInt(1000000), 1);
    ApproxRecord b = best_approx(start, tgt, g235, BigInt(1000000), 4);
    CHECK(a.best == b.best);
    CHECK(a.argmin.e == b.argmin.e);
}

TEST_CASE("direction estimates: parallel == serial") {
    int bits = choose_bits(BigInt(1000000), BigRat(1, BigInt("1000000000000")));
    TorusPoint start = parse_point("0,sqrt(2)", bits);
    auto samples = enumerate_orbit(start, g235, BigInt(1000000), 2);
    auto a = estimate_der_q(samples, 3, 0.05, 0.02, 1);
    auto b = estimate_der_q(samples, 3, 0.05, 0.02, 4);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(center(a[i].anchor.x) == center(b[i].anchor.x));
        CHECK(center(a[i].anchor.y) == center(b[i].anchor.y));
        REQUIRE(a[i].clusters.size() == b[i].clusters.size());
        for (size_t j = 0; j < a[i].clusters.size(); ++j) {
            CHECK(a[i].clusters[j].mean_angle == b[i].clusters[j].mean_angle);
            CHECK(a[i].clusters[j].weight == b[i].clusters[j].weight);
        }
    }
}
