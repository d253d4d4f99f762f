#include "torus/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace torus {

GeneratorSet::GeneratorSet(std::vector<unsigned long> g) : gens(std::move(g)) {
    if (gens.empty()) throw precondition_error("GeneratorSet: empty");
    for (size_t i = 0; i < gens.size(); ++i) {
        if (gens[i] < 2) throw precondition_error("GeneratorSet: generators must be >= 2");
        for (size_t j = i + 1; j < gens.size(); ++j)
            if (gens[i] == gens[j])
                throw precondition_error("GeneratorSet: generators must be distinct");
    }
}

unsigned long ExpVec::sum() const {
    unsigned long s = 0;
    for (unsigned v : e) s += v;
    return s;
}

bool lex_less(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Each vector is generated exactly once: the children of v are v + e_i for
// i <= first nonzero index of v (every i when v = 0), which makes
// "decrement the first nonzero coordinate" the unique parent map.
std::vector<ExpVec> enumerate_smooth(const GeneratorSet& g, const BigInt& s_max) {
    if (s_max < 1) throw precondition_error("enumerate_smooth: s_max must be >= 1");
    struct Node {
        BigInt mult;
        std::vector<unsigned> e;
        size_t frontier;  // children may increment indices 0..frontier
    };
    auto cmp = [](const Node& a, const Node& b) {
        if (a.mult != b.mult) return a.mult > b.mult;
        return lex_less(b.e, a.e);
    };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
    heap.push(Node{BigInt(1), std::vector<unsigned>(g.size(), 0), g.size() - 1});

    std::vector<ExpVec> out;
    while (!heap.empty()) {
        Node cur = heap.top();
        heap.pop();
        out.push_back(ExpVec{cur.e, cur.mult});
        for (size_t i = 0; i <= cur.frontier; ++i) {
            BigInt m = cur.mult * g.gens[i];
            if (m > s_max) continue;
            Node child{std::move(m), cur.e, i};
            child.e[i] += 1;
            heap.push(std::move(child));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fixed-point logs. ln u for u = n/2^s in [1,2) via the atanh series at
// z = (u-1)/(u+1) in [0,1/3); the series is summed exactly in rationals and
// rounded once, so the only error sources are the truncated tail and that
// single rounding. Perfect powers factor through their base, which keeps
// rational log-ratios (e.g. log4/log2) exact in fixed point.

namespace {

BigInt fixed_log_uncached(unsigned long n, int prec) {
    if (n < 1) throw precondition_error("fixed_log: n must be >= 1");
    if (n == 1) return BigInt(0);

    // perfect power: n = b^e
    for (unsigned long e = 2; e <= 63 && (1UL << e) <= n; ++e) {
        BigInt root, bn(n);
        if (mpz_root(root.get_mpz_t(), bn.get_mpz_t(), e) != 0 && root > 1)
            return fixed_log_uncached(root.get_ui(), prec) * e;
    }

    int s = 0;
    while ((n >> (s + 1)) >= 1) ++s;  // 2^s <= n < 2^(s+1)

    // z = (n - 2^s)/(n + 2^s); for n = 2 take u = n itself (z = 1/3)
    BigRat z = (n == 2) ? BigRat(1, 3)
                        : make_rat(BigInt(n - (1UL << s)), BigInt(n + (1UL << s)));
    BigRat z2 = z * z;
    BigRat term = z;
    BigRat sum(0);
    // tail after J terms <= 2*z^(2J+3)/((2J+3)(1-z^2)), far below one ulp here
    int terms = prec / 3 + 8;
    for (int j = 0; j < terms; ++j) {
        sum += term / BigRat(2 * j + 1);
        term *= z2;
    }
    sum *= 2;

    BigInt rounded;
    BigRat scaled = sum * BigRat(pow2(prec));
    mpz_fdiv_q(rounded.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    if (n == 2) return rounded;
    return rounded + fixed_log_uncached(2, prec) * static_cast<unsigned long>(s);
}

}  // namespace

BigInt fixed_log(unsigned long n, int prec) {
    static std::mutex mu;
    static std::map<std::pair<unsigned long, int>, BigInt> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, prec);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    BigInt v = fixed_log_uncached(n, prec);
    cache.emplace(key, v);
    return v;
}

// ---------------------------------------------------------------------------

namespace {

using u128 = unsigned __int128;

u128 bigint_to_u128(const BigInt& v) {
    BigInt hi = v >> 64;
    BigInt lo = v - (hi << 64);
    return (u128(mpz_get_ui(hi.get_mpz_t())) << 64) | mpz_get_ui(lo.get_mpz_t());
}

double u128_to_double(u128 v) {
    return std::ldexp(static_cast<double>(static_cast<uint64_t>(v >> 64)), 64) +
           static_cast<double>(static_cast<uint64_t>(v));
}

u128 scale_up(double v, int prec, bool round_up) {
    BigRat scaled = BigRat(v) * BigRat(pow2(prec));
    BigInt q;
    if (round_up)
        mpz_cdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    else
        mpz_fdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    return bigint_to_u128(q);
}

// All semigroup log-points in [lo, hi], fixed point at 2^prec, sorted, with
// near-duplicates (within 2^(prec-64)) collapsed.
std::vector<u128> log_points_in(const GeneratorSet& g, u128 lo, u128 hi, int prec) {
    std::vector<u128> logs;
    for (unsigned long gen : g.gens) logs.push_back(bigint_to_u128(fixed_log(gen, prec)));

    std::vector<u128> pts;
    auto rec = [&](auto&& self, size_t i, u128 acc) -> void {
        if (acc > hi) return;
        if (i == g.size() - 1) {
            u128 k_lo = 0;
            if (acc < lo) k_lo = (lo - acc + logs[i] - 1) / logs[i];
            for (u128 k = k_lo; acc + k * logs[i] <= hi; ++k) pts.push_back(acc + k * logs[i]);
            return;
        }
        for (u128 k = 0; acc + k * logs[i] <= hi; ++k) self(self, i + 1, acc + k * logs[i]);
    };
    rec(rec, 0, 0);
    std::sort(pts.begin(), pts.end());

    u128 tol = prec > 64 ? (u128(1) << (prec - 64)) : 1;
    std::vector<u128> dedup;
    for (u128 p : pts)
        if (dedup.empty() || p - dedup.back() > tol) dedup.push_back(p);
    return dedup;
}

struct WindowGap {
    u128 max_gap;  // capped at scale(1)
    uint64_t count;
};

WindowGap window_gap(const std::vector<u128>& pts, u128 m_lo, u128 one) {
    u128 m_hi = m_lo + one;
    // prev = largest point <= m_lo, next = smallest point >= m_hi; out-of-range
    // sentinels produce gaps longer than the window, which get capped.
    auto it_lo = std::upper_bound(pts.begin(), pts.end(), m_lo);
    auto it_hi = std::lower_bound(pts.begin(), pts.end(), m_hi);

    std::vector<u128> chain;
    chain.push_back(it_lo == pts.begin() ? (m_lo >= one ? m_lo - one : 0) : *(it_lo - 1));
    for (auto it = it_lo; it != it_hi; ++it) chain.push_back(*it);
    chain.push_back(it_hi == pts.end() ? m_hi + one : *it_hi);

    u128 best = 0;
    for (size_t i = 0; i + 1 < chain.size(); ++i)
        best = std::max(best, chain[i + 1] - chain[i]);
    if (best > one) best = one;

    uint64_t count = 0;
    for (auto it = std::lower_bound(pts.begin(), pts.end(), m_lo);
         it != pts.end() && *it <= m_hi; ++it)
        ++count;
    return {best, count};
}

}  // namespace

GapReport log_gap(double M, const GeneratorSet& g, double horizon) {
    if (M < 0) throw precondition_error("log_gap: M must be >= 0");
    if (horizon < M + 1) throw precondition_error("log_gap: horizon must be >= M+1");
    const int prec = kLogPrecision;
    const u128 one = u128(1) << prec;
    u128 m_lo = scale_up(M, prec, false);
    u128 enum_lo = m_lo >= one ? m_lo - one : 0;
    auto pts = log_points_in(g, enum_lo, m_lo + 2 * one, prec);
    WindowGap w = window_gap(pts, m_lo, one);

    GapReport rep;
    rep.M = M;
    rep.count = w.count;
    rep.max_gap = u128_to_double(w.max_gap) / u128_to_double(one);
    rep.generators = g.gens;
    return rep;
}

std::optional<double> density_threshold(double delta, const GeneratorSet& g, double m_cap) {
    if (!(delta > 0) || !(delta < 1))
        throw precondition_error("density_threshold: delta outside (0,1)");
    if (m_cap < 0) throw precondition_error("density_threshold: m_cap must be >= 0");
    const int prec = kLogPrecision;
    const u128 one = u128(1) << prec;
    long cap = static_cast<long>(std::floor(m_cap));
    auto pts = log_points_in(g, 0, u128(cap) * one + 2 * one, prec);
    u128 dfix = scale_up(delta, prec, true);

    long last_bad = -1;
    for (long m = 0; m <= cap; ++m) {
        WindowGap w = window_gap(pts, u128(m) * one, one);
        if (w.max_gap > dfix) last_bad = m;
    }
    long m_star = last_bad + 1;
    if (m_star > cap) return std::nullopt;
    return static_cast<double>(m_star);
}

}  // namespace torus
