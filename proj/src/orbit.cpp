#include "torus/orbit.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace torus {

std::vector<OrbitSample> enumerate_orbit(const TorusPoint& start, const GeneratorSet& g,
                                         const BigInt& s_max, int threads) {
    std::vector<ExpVec> triples = enumerate_smooth(g, s_max);
    std::vector<std::optional<OrbitSample>> slots(triples.size());

    // exceptions must not unwind out of the parallel region; capture and rethrow
    std::exception_ptr error;
#pragma omp parallel for num_threads(threads) if (threads > 1) schedule(static)
    for (size_t i = 0; i < triples.size(); ++i) {
        try {
            slots[i] = OrbitSample{triples[i], mul_point(start, triples[i].multiplier)};
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    std::vector<OrbitSample> out;
    out.reserve(triples.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::vector<OrbitSample> distinct_samples(std::vector<OrbitSample> samples) {
    std::set<std::pair<BigRat, BigRat>> seen;
    std::vector<OrbitSample> out;
    for (auto& s : samples) {
        auto key = std::make_pair(center(s.point.x), center(s.point.y));
        if (seen.insert(key).second) out.push_back(std::move(s));
    }
    return out;
}

std::vector<TorusPoint> rational_closure(const TorusPoint& start, const GeneratorSet& g) {
    if (!start.exact())
        throw precondition_error("rational_closure: start must be rational");
    using Key = std::pair<BigRat, BigRat>;
    std::set<Key> seen;
    std::vector<Key> queue;
    Key k0{start.rx().value(), start.ry().value()};
    seen.insert(k0);
    queue.push_back(k0);
    while (!queue.empty()) {
        Key cur = queue.back();
        queue.pop_back();
        for (unsigned long gen : g.gens) {
            Key next{mod1(cur.first * BigRat(gen)), mod1(cur.second * BigRat(gen))};
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    std::vector<TorusPoint> out;
    out.reserve(seen.size());
    for (const auto& k : seen) out.emplace_back(Rat(k.first), Rat(k.second));
    return out;  // std::set iteration is already (x, y)-sorted
}

BigRat relation_tolerance(const TorusPoint& start, long c_bound) {
    if (start.exact()) return BigRat(0);
    BigRat e = err_bound(start.x);
    BigRat ey = err_bound(start.y);
    if (ey > e) e = ey;
    return BigRat(2 * c_bound) * e;
}

namespace {

BigInt nearest_int(const BigRat& v) {
    BigRat shifted = v + BigRat(1, 2);
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    return fl;
}

}  // namespace

std::optional<Relation> find_relation(const TorusValue& x, const TorusValue& y,
                                      long c_bound, const BigRat& tau) {
    if (c_bound < 1) throw precondition_error("find_relation: bound must be >= 1");
    if (tau < 0) throw precondition_error("find_relation: tau must be >= 0");
    for (long level = 1; level <= c_bound; ++level) {
        std::optional<Relation> best;
        BigInt best_abs_k;
        auto consider = [&](long m, long n) {
            if (std::max(std::labs(m), std::labs(n)) != level) return;
            CertScalar s = linear_form(BigInt(m), x, BigInt(n), y);
            BigInt k = nearest_int(s.center);
            BigRat resid = s.center - BigRat(k);
            if (resid < 0) resid = -resid;
            if (resid > tau) return;
            BigInt g;
            mpz_gcd_ui(g.get_mpz_t(), k.get_mpz_t(),
                       std::gcd(std::labs(m), std::labs(n)));
            if (g != 1) return;
            BigInt ak = abs(k);
            if (!best || ak < best_abs_k) {
                best = Relation{m, n, k};
                best_abs_k = ak;
            }
        };
        // canonical representatives only: m > 0, or m = 0 with n > 0
        consider(0, level);
        for (long m = 1; m <= level; ++m)
            for (long n = -level; n <= level; ++n) consider(m, n);
        if (best) return best;
    }
    return std::nullopt;
}

ClosureClass classify(const TorusPoint& start, const GeneratorSet& g, long c_bound,
                      const BigRat& tau) {
    if (start.exact()) return FiniteClass{rational_closure(start, g)};
    auto rel = find_relation(start.x, start.y, c_bound, tau);
    if (rel) {
        CertScalar s = linear_form(BigInt(rel->m), start.x, BigInt(rel->n), start.y);
        BigRat resid = s.center - BigRat(rel->k);
        if (resid < 0) resid = -resid;
        Certainty c = (resid == 0 && s.err == 0) ? Certainty::exact
                                                 : Certainty::bounded_search;
        return LineUnionClass{*rel, c};
    }
    return DenseClass{Certainty::bounded_search};
}

ExpVec pre_image(const ExpVec& t, const GeneratorSet& g) {
    if (t.e.size() != g.size())
        throw precondition_error("pre_image: arity mismatch");
    if (t.is_zero()) throw precondition_error("pre_image: zero vector has no pre-image");
    ExpVec out = t;
    for (size_t i = 0; i < out.e.size(); ++i) {
        if (out.e[i] > 0) {
            out.e[i] -= 1;
            out.multiplier = t.multiplier / g.gens[i];
            return out;
        }
    }
    throw precondition_error("pre_image: unreachable");
}

}  // namespace torus
