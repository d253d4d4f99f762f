#include "torus/selection.hpp"

namespace torus {

SelectionResult select_pair(const Rat& r, const BigInt& n) {
    if (n < 1) throw precondition_error("select_pair: N must be positive");
    BigInt q = r.den();
    BigInt g;
    mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
    BigInt w = q / g;  // = lcm(q,N)/N
    if (w == 1) throw precondition_error("select_pair: r lies in Z/N");

    SelectionResult res;
    BigInt rest = w;
    res.k2 = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), BigInt(2).get_mpz_t());
    res.k3 = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), BigInt(3).get_mpz_t());
    res.k5 = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), BigInt(5).get_mpz_t());
    res.big_q = rest;

    if (res.k2 > 0) {
        res.a = 3;
        res.b = 5;
    } else if (res.k3 > 0) {
        res.a = 2;
        res.b = 5;
    } else if (res.k5 > 0) {
        res.a = 2;
        res.b = 3;
    } else {
        // Q > 1 here; any pair works, (2,3) is the fixed choice
        res.a = 2;
        res.b = 3;
    }
    return res;
}

SelectionResult select_pair_nonvanishing(const Rat& r) {
    if (r.is_zero()) throw precondition_error("select_pair_nonvanishing: r must be nonzero");
    return select_pair(r, BigInt(1));
}

bool verify_pair(const Rat& r, const BigInt& n, int a, int b, unsigned bound) {
    if (a < 2 || b < 2) throw precondition_error("verify_pair: a,b must be >= 2");
    if (bound < 1) throw precondition_error("verify_pair: bound must be >= 1");
    if (n < 1) throw precondition_error("verify_pair: N must be positive");
    // a^m b^n r in Z/N  <=>  den(N * a^m b^n r) == 1
    BigRat rm = r.value();
    for (unsigned i = 0; i <= bound; ++i) {
        BigRat v = rm;
        for (unsigned j = 0; j <= bound; ++j) {
            BigRat scaled = v * BigRat(n);
            if (scaled.get_den() == 1) return false;
            v *= b;
        }
        rm *= a;
    }
    return true;
}

}  // namespace torus
