#include "doctest.h"
#include "torus/invariant.hpp"

using namespace torus;

namespace {
Rat rat(long n, long d) { return Rat(BigInt(n), BigInt(d)); }
TorusPoint rp(const Rat& x, const Rat& y) {
    return TorusPoint(TorusValue(x), TorusValue(y));
}
const GeneratorSet g235 = GeneratorSet::default235();
}

TEST_CASE("rhombus membership closed form") {
    RhombusSet e(rat(1, 100000), 5);
    // on the axis: always in
    CHECK(in_rhombus_set(e, rp(rat(0, 1), rat(3, 10))) == Membership::in);
    // half-width at y=1/10 (N=5): (2e-5/5) * dist(1/2) = 2e-6
    CHECK(in_rhombus_set(e, rp(Rat(BigInt(1), BigInt(1000000)), rat(1, 10))) ==
          Membership::in);
    CHECK(in_rhombus_set(e, rp(Rat(BigInt(3), BigInt(1000000)), rat(1, 10))) ==
          Membership::out);
    // vertices (0, j/N) are in: half-width 0 met by x-distance 0
    for (int j = 0; j < 5; ++j)
        CHECK(in_rhombus_set(e, rp(rat(0, 1), rat(j, 5))) == Membership::in);
    // delta range enforcement
    CHECK_THROWS_AS(RhombusSet(rat(1, 100), 5), precondition_error);
    CHECK_NOTHROW(RhombusSet::for_visualization(rat(1, 50), 5));
}

TEST_CASE("rhombus symmetries") {
    RhombusSet e(rat(7, 100000), 3);
    uint64_t st = 5;
    auto next = [&st] {
        st = st * 6364136223846793005ULL + 1442695040888963407ULL;
        return st >> 33;
    };
    for (int i = 0; i < 500; ++i) {
        // x near the axis so both verdicts occur
        Rat x(BigInt(static_cast<long>(next() % 2000) - 1000), BigInt(10000000));
        Rat y(BigInt(static_cast<long>(next() % 9999)), BigInt(9999));
        Membership m = in_rhombus_set(e, rp(x, y));
        // y -> y + 1/N periodicity
        CHECK(in_rhombus_set(e, rp(x, Rat(y.value() + BigRat(1, 3)))) == m);
        // x -> -x symmetry
        CHECK(in_rhombus_set(e, rp(Rat(-x.value()), y)) == m);
    }
}

TEST_CASE("pre-image property holds exactly on seeded samples") {
    for (unsigned n : {1u, 3u, 7u}) {
        RhombusSet e(rat(1, 100000), n);
        PpReport rep = check_preimage_property(e, 20000, 42);
        CHECK(rep.violations == 0);
        CHECK(rep.checked + rep.skipped_in_e == rep.requested);
        CHECK(!rep.counterexample.has_value());
    }
}

TEST_CASE("fast pp kernel agrees with the exact reference loop") {
    RhombusSet e(rat(1, 100000), 7);
    PpReport fast = check_preimage_property(e, 5000, 1234);
    PpReport ref = check_preimage_property_reference(e, 5000, 1234);
    CHECK(fast.skipped_in_e == ref.skipped_in_e);
    CHECK(fast.checked == ref.checked);
    CHECK(fast.violations == ref.violations);
}

TEST_CASE("track_preimages on an exact chain") {
    // start (1/7,2/7), triple (2,0,0): points (4/7,1/7) -> (2/7,4/7) -> (1/7,2/7)
    TorusPoint start = rp(rat(1, 7), rat(2, 7));
    ExpVec t{{2, 0, 0}, BigInt(4)};
    OrbitSample sample{t, mul_point(start, t.multiplier)};
    RhombusSet e(rat(1, 100000), 7);
    auto steps = track_preimages(start, sample, e, g235);
    REQUIRE(steps.size() == 3);
    CHECK(steps[0].dist_l0.lo == BigRat(3, 7));
    CHECK(steps[1].dist_l0.lo == BigRat(2, 7));
    CHECK(steps[2].dist_l0.lo == BigRat(1, 7));
    CHECK(center(steps[2].point.x) == BigRat(1, 7));
    CHECK(center(steps[2].point.y) == BigRat(2, 7));
    // halving fails on both transitions here (2/7 > (3/7)/2)
    CHECK(steps[0].halved.has_value());
    CHECK(!*steps[0].halved);
    CHECK(!steps[2].halved.has_value());

    // start on the axis: distances all zero, halving trivially holds
    TorusPoint axis = rp(rat(0, 1), rat(1, 3));
    ExpVec t2{{1, 1, 0}, BigInt(6)};
    OrbitSample s2{t2, mul_point(axis, t2.multiplier)};
    auto steps2 = track_preimages(axis, s2, e, g235);
    REQUIRE(steps2.size() == 3);
    CHECK(steps2[0].triple.e == std::vector<unsigned>{1, 1, 0});
    CHECK(steps2[1].triple.e == std::vector<unsigned>{0, 1, 0});
    CHECK(steps2[2].triple.e == std::vector<unsigned>{0, 0, 0});
    for (const auto& st : steps2) CHECK(st.dist_l0.lo == 0);
    CHECK(*steps2[0].halved);

    // chain length = exponent sum + 1, final step is the start (exact backend)
    for (const auto& tr : enumerate_smooth(g235, BigInt(360))) {
        OrbitSample s{tr, mul_point(start, tr.multiplier)};
        auto chain = track_preimages(start, s, e, g235);
        CHECK(chain.size() == tr.sum() + 1);
        CHECK(center(chain.back().point.x) == center(start.x));
        CHECK(center(chain.back().point.y) == center(start.y));
    }

    // a sample that is not on the orbit violates the precondition
    OrbitSample bogus{t, rp(rat(1, 9), rat(1, 9))};
    CHECK_THROWS_AS(track_preimages(start, bogus, e, g235), precondition_error);
}

TEST_CASE("linear form system validation") {
    RationalLine l0 = make_line(1, 0, Rat());
    RationalLine diag = make_line(1, -1, Rat());
    CHECK_NOTHROW(LinearFormSystem({l0, diag}));
    CHECK_THROWS_AS(LinearFormSystem({diag}), precondition_error);
    CHECK_THROWS_AS(LinearFormSystem({l0, make_line(1, -1, rat(1, 3))}),
                    precondition_error);
    CHECK_THROWS_AS(LinearFormSystem({l0, diag, diag}), precondition_error);
}

TEST_CASE("rational_points_on_system") {
    LinearFormSystem axis_only({make_line(1, 0, Rat())});
    auto pts = rational_points_on_system(axis_only, 3);
    REQUIRE(pts.size() == 4);  // (0,0),(0,1/3),(0,1/2),(0,2/3)
    for (const auto& p : pts) CHECK(center(p.x) == 0);

    LinearFormSystem with_diag({make_line(1, 0, Rat()), make_line(1, -1, Rat())});
    auto pts2 = rational_points_on_system(with_diag, 2);
    // (0,0),(0,1/2),(1/2,1/2)
    REQUIRE(pts2.size() == 3);
    bool has_half = false;
    for (const auto& p : pts2)
        if (center(p.x) == BigRat(1, 2) && center(p.y) == BigRat(1, 2)) has_half = true;
    CHECK(has_half);

    // nothing with x=1/2 lies in the axis-only system
    for (const auto& p : pts) CHECK(center(p.x) != BigRat(1, 2));
}
