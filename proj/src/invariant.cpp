#include "torus/invariant.hpp"

#include <algorithm>
#include <numeric>

namespace torus {

RhombusSet::RhombusSet(Rat delta, unsigned n, bool vis) : delta_(std::move(delta)), n_(n) {
    if (n_ < 1) throw precondition_error("RhombusSet: N must be >= 1");
    BigRat lim = vis ? BigRat(1, 10) : BigRat(1, 10000);
    if (delta_.value() <= 0 || delta_.value() >= lim)
        throw precondition_error("RhombusSet: delta out of range");
}

RhombusSet::RhombusSet(Rat delta, unsigned n) : RhombusSet(std::move(delta), n, false) {}

RhombusSet RhombusSet::for_visualization(Rat delta, unsigned n) {
    return RhombusSet(std::move(delta), n, true);
}

Membership in_rhombus_set(const RhombusSet& e, const TorusPoint& a) {
    // dist(x) <= (2 delta / N) * dist(N y)
    RatInterval dx = dist_to_int(a.x);
    RatInterval dny = dist_to_int(mul_int(a.y, BigInt(e.n())));
    BigRat c = 2 * e.delta().value() / e.n();
    if (dx.hi <= c * dny.lo) return Membership::in;
    if (dx.lo > c * dny.hi) return Membership::out;
    return Membership::boundary;
}

// ---------------------------------------------------------------------------

uint64_t mix64(uint64_t seed, uint64_t index) {
    uint64_t x = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

using u128 = unsigned __int128;

struct FastPpParams {
    uint64_t x_span;        // floor(delta * 2^64); x numerator drawn from [-span, span]
    uint64_t delta_num, delta_den;
    uint64_t n;
    bool usable;            // word-size bounds hold for the u128 comparisons
};

FastPpParams fast_params(const RhombusSet& e) {
    FastPpParams p{};
    const BigRat& d = e.delta().value();
    BigInt span_b = (d.get_num() << 64) / d.get_den();
    p.usable = d.get_num().fits_ulong_p() && d.get_den().fits_ulong_p() &&
               span_b.fits_ulong_p();
    if (!p.usable) return p;
    p.x_span = span_b.get_ui();
    p.delta_num = d.get_num().get_ui();
    p.delta_den = d.get_den().get_ui();
    p.n = e.n();
    // dist * N * delta_den and 2 * delta_num * dist must fit in u128
    if (p.delta_den > (1ULL << 30) || p.n > (1ULL << 30) || p.delta_num > (1ULL << 60))
        p.usable = false;
    return p;
}

inline uint64_t dist64(uint64_t v) { return std::min(v, uint64_t(0) - v); }

// dist(x) <= (2 delta / N) * dist(N y), numerators at denominator 2^64
inline bool in_e_fast(const FastPpParams& p, uint64_t xn, uint64_t yn) {
    uint64_t dx = dist64(xn);
    uint64_t dny = dist64(static_cast<uint64_t>(u128(p.n) * yn));
    return u128(dx) * p.n * p.delta_den <= u128(2) * p.delta_num * dny;
}

struct SampleDraw {
    uint64_t xn, yn;
};

inline SampleDraw draw(uint64_t seed, uint64_t index, uint64_t x_span) {
    uint64_t u = mix64(seed, 2 * index);
    uint64_t v = mix64(seed, 2 * index + 1);
    uint64_t width = 2 * x_span + 1;
    uint64_t j = u % width;  // [0, 2*span]
    return {j - x_span, v};  // wraps mod 2^64: numerator in [-span, span]
}

}  // namespace

PpReport check_preimage_property(const RhombusSet& e, uint64_t samples, uint64_t seed,
                                 int threads) {
    if (samples < 1) throw precondition_error("check_preimage_property: samples >= 1");
    FastPpParams p = fast_params(e);
    if (!p.usable) return check_preimage_property_reference(e, samples, seed);

    uint64_t skipped = 0, violations = 0;
    uint64_t first_bad = UINT64_MAX;

#pragma omp parallel for num_threads(threads) if (threads > 1) schedule(static) \
    reduction(+ : skipped, violations) reduction(min : first_bad)
    for (uint64_t i = 0; i < samples; ++i) {
        SampleDraw s = draw(seed, i, p.x_span);
        if (in_e_fast(p, s.xn, s.yn)) {
            ++skipped;
            continue;
        }
        for (uint64_t k : {2, 3, 5}) {
            if (in_e_fast(p, k * s.xn, static_cast<uint64_t>(u128(k) * s.yn))) {
                ++violations;
                first_bad = std::min(first_bad, i);
                break;
            }
        }
    }

    PpReport rep;
    rep.requested = samples;
    rep.skipped_in_e = skipped;
    rep.checked = samples - skipped;
    rep.violations = violations;
    rep.seed = seed;
    if (violations > 0) {
        SampleDraw s = draw(seed, first_bad, p.x_span);
        BigInt two64 = pow2(64);
        Rat x(BigInt(s.xn), two64), y(BigInt(s.yn), two64);
        int gen = 0;
        for (uint64_t k : {2, 3, 5})
            if (in_e_fast(p, k * s.xn, static_cast<uint64_t>(u128(k) * s.yn))) {
                gen = static_cast<int>(k);
                break;
            }
        rep.counterexample = PpCounterexample{first_bad, x, y, gen};
    }
    return rep;
}

PpReport check_preimage_property_reference(const RhombusSet& e, uint64_t samples,
                                           uint64_t seed) {
    BigInt two64 = pow2(64);
    BigInt span = (e.delta().value().get_num() << 64) / e.delta().value().get_den();

    PpReport rep;
    rep.requested = samples;
    rep.seed = seed;
    for (uint64_t i = 0; i < samples; ++i) {
        uint64_t u = mix64(seed, 2 * i);
        uint64_t v = mix64(seed, 2 * i + 1);
        BigInt width = 2 * span + 1;
        BigInt j = BigInt(u) % width - span;
        Rat x(j, two64);  // Rat reduces mod 1, so negative numerators wrap
        Rat y(BigInt(v), two64);
        TorusPoint a{TorusValue(x), TorusValue(y)};
        if (in_rhombus_set(e, a) == Membership::in) {
            ++rep.skipped_in_e;
            continue;
        }
        ++rep.checked;
        for (int k : {2, 3, 5}) {
            TorusPoint img = mul_point(a, BigInt(k));
            if (in_rhombus_set(e, img) == Membership::in) {
                ++rep.violations;
                if (!rep.counterexample)
                    rep.counterexample = PpCounterexample{i, x, y, k};
                break;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<TrackStep> track_preimages(const TorusPoint& start, const OrbitSample& sample,
                                       const RhombusSet& e, const GeneratorSet& g) {
    // triple-consistency: the sample's point must be the recomputed one
    // (exact equality for rationals, certified overlap for fixed points)
    TorusPoint recomputed = mul_point(start, sample.triple.multiplier);
    for (auto [a, b] : {std::pair{&recomputed.x, &sample.point.x},
                        std::pair{&recomputed.y, &sample.point.y}}) {
        BigRat diff = mod1(center(*a) - center(*b));
        if (diff > BigRat(1, 2)) diff = 1 - diff;
        if (diff > err_bound(*a) + err_bound(*b))
            throw precondition_error("track_preimages: sample is not on the orbit");
    }

    std::vector<TrackStep> steps;
    ExpVec cur = sample.triple;
    while (true) {
        TorusPoint pt = mul_point(start, cur.multiplier);
        TrackStep st{cur, pt, in_rhombus_set(e, pt), dist_to_int(pt.x), std::nullopt};
        steps.push_back(std::move(st));
        if (cur.is_zero()) break;
        cur = pre_image(cur, g);
    }
    // halving flags describe the transition from each step to the next;
    // for certified values the inequality must hold across the error bands
    for (size_t i = 0; i + 1 < steps.size(); ++i)
        steps[i].halved = 2 * steps[i + 1].dist_l0.hi <= steps[i].dist_l0.lo;
    return steps;
}

// ---------------------------------------------------------------------------

LinearFormSystem::LinearFormSystem(std::vector<RationalLine> ls) : lines(std::move(ls)) {
    if (lines.empty() || lines[0].a != 1 || lines[0].b != 0 || !lines[0].c.is_zero())
        throw precondition_error("LinearFormSystem: lines[0] must be the vertical axis (1,0;0)");
    for (const auto& l : lines)
        if (!l.homogeneous())
            throw precondition_error("LinearFormSystem: all lines must be homogeneous");
    for (size_t i = 0; i < lines.size(); ++i)
        for (size_t j = i + 1; j < lines.size(); ++j)
            if (lines[i].a == lines[j].a && lines[i].b == lines[j].b)
                throw precondition_error("LinearFormSystem: duplicate line");
}

std::vector<TorusPoint> rational_points_on_system(const LinearFormSystem& s,
                                                  unsigned q_max) {
    if (q_max < 1) throw precondition_error("rational_points_on_system: q_max >= 1");
    std::vector<BigRat> fracs;
    for (unsigned q = 1; q <= q_max; ++q)
        for (unsigned p = 0; p < q; ++p)
            if (std::gcd(p, q) == 1) fracs.push_back(make_rat(BigInt(p), BigInt(q)));
    std::sort(fracs.begin(), fracs.end());

    std::vector<TorusPoint> out;
    for (const BigRat& x : fracs)
        for (const BigRat& y : fracs) {
            bool on = false;
            for (const auto& l : s.lines) {
                BigRat v = BigRat(l.a) * x + BigRat(l.b) * y;
                if (mod1(v) == 0) {
                    on = true;
                    break;
                }
            }
            if (on) out.emplace_back(Rat(x), Rat(y));
        }
    return out;
}

}  // namespace torus
