// arith.hpp - exact rational and certified fixed-point arithmetic on the circle R/Z.
//
// Two backends share one interface:
//   Rat       - reduced fraction in [0,1), all operations exact.
//   FixedReal - mantissa/2^B in [0,1) with a tracked error multiplier; the true
//               value is within err_mult*2^-B of mantissa/2^B. Multiplying by an
//               integer k multiplies the error bound by exactly k, so certification
//               is a single bignum product.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace torus {

using BigInt = mpz_class;
using BigRat = mpq_class;

// Error bound would exceed 1/4 of the circle; caller must raise B.
struct precision_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A stated operation precondition does not hold.
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

BigInt pow2(int bits);
BigInt parse_digits(const std::string& s);              // base 10, leading zeros allowed
BigRat make_rat(const BigInt& num, const BigInt& den);  // canonicalized
BigRat mod1(const BigRat& v);                           // representative in [0,1)

// Distance from an arbitrary rational to the nearest integer.
BigRat rat_dist_to_int(const BigRat& v);

// ceil(log2(v)) for v >= 1.
int ceil_log2(const BigRat& v);

// Run-level precision rule: B >= ceil(log2 s_max) + ceil(log2 1/eps) + 8 guard bits.
int choose_bits(const BigInt& s_max, const BigRat& eps_target);

// ---------------------------------------------------------------------------

class Rat {
  public:
    Rat() : v_(0) {}
    explicit Rat(const BigRat& v) : v_(mod1(v)) {}
    Rat(const BigInt& num, const BigInt& den);

    const BigRat& value() const { return v_; }
    BigInt num() const { return v_.get_num(); }
    BigInt den() const { return v_.get_den(); }
    bool is_zero() const { return v_ == 0; }

    Rat mul_int(const BigInt& k) const;  // k >= 1
    Rat add(const Rat& o) const { return Rat(BigRat(v_ + o.v_)); }
    Rat sub(const Rat& o) const { return Rat(BigRat(v_ - o.v_)); }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator<(const Rat& o) const { return v_ < o.v_; }

  private:
    BigRat v_;  // canonical, 0 <= v_ < 1
};

// ---------------------------------------------------------------------------

class FixedReal {
  public:
    FixedReal(BigInt mantissa, int bits, BigInt err_mult);

    static FixedReal from_rat(const Rat& r, int bits);
    // Fractional part of sqrt(n) for a positive non-square integer n.
    static FixedReal sqrt_frac(const BigInt& n, int bits);

    const BigInt& mantissa() const { return m_; }
    int bits() const { return bits_; }
    const BigInt& err_mult() const { return err_; }

    BigRat center() const { return make_rat(m_, pow2(bits_)); }
    BigRat err_bound() const { return make_rat(err_, pow2(bits_)); }

    FixedReal mul_int(const BigInt& k) const;  // k >= 1
    FixedReal add_rat(const Rat& r) const;     // one ulp of rounding, err_mult += 1
    FixedReal add(const FixedReal& o) const;   // mantissas add exactly, errors add

  private:
    void check() const;
    BigInt m_;   // 0 <= m_ < 2^bits_
    int bits_;   // > 0
    BigInt err_;  // >= 1; |true - m_/2^bits_| <= err_ * 2^-bits_ on the circle
};

// ---------------------------------------------------------------------------

using TorusValue = std::variant<Rat, FixedReal>;

bool is_exact(const TorusValue& v);
bool same_tag(const TorusValue& a, const TorusValue& b);
BigRat center(const TorusValue& v);
BigRat err_bound(const TorusValue& v);  // 0 for Rat
TorusValue mul_int(const TorusValue& v, const BigInt& k);
TorusValue promote(const TorusValue& v, int bits);  // Rat -> FixedReal(bits)

// Exact rational enclosure [lo, hi] of a real quantity.
struct RatInterval {
    BigRat lo, hi;
    static RatInterval exact(const BigRat& v) { return {v, v}; }
    BigRat width() const { return hi - lo; }
    bool is_exact() const { return lo == hi; }
};

// Certified distance to the nearest integer, clamped to [0, 1/2].
RatInterval dist_to_int(const TorusValue& v);

// ---------------------------------------------------------------------------

struct TorusPoint {
    TorusValue x, y;
    TorusPoint(TorusValue px, TorusValue py);
    bool exact() const { return is_exact(x); }
    const Rat& rx() const { return std::get<Rat>(x); }
    const Rat& ry() const { return std::get<Rat>(y); }
};

TorusPoint mul_point(const TorusPoint& a, const BigInt& k);
TorusPoint promote_point(const TorusPoint& a, int bits);

// Real-line value of m*x + n*y from the [0,1) representatives, not reduced mod 1.
// center is exact; |true - center| <= err.
struct CertScalar {
    BigRat center;
    BigRat err;
};

CertScalar linear_form(const BigInt& m, const TorusValue& x, const BigInt& n,
                       const TorusValue& y);
RatInterval dist_to_int(const CertScalar& s);

// Euclidean distance on R^2/Z^2; the squared distance is enclosed exactly.
struct TorusDistance {
    RatInterval squared;
    double lower() const;
    double upper() const;
};

TorusDistance torus_distance(const TorusPoint& a, const TorusPoint& b);

// Per-coordinate circle distance |x_a - x_b| on R/Z, certified.
RatInterval coord_distance(const TorusValue& a, const TorusValue& b);

// ---------------------------------------------------------------------------
// Parsing. Accepted term syntax: "p/q", decimal literal, integer, "sqrt(n)".
// Terms may be combined with '+' and '-' (e.g. "sqrt(2)+1/3"); the sum is taken
// mod 1. Result is Rat iff every term is rational.

TorusValue parse_value(const std::string& text, int bits);
TorusPoint parse_point(const std::string& text, int bits);  // "x,y"

// Exact truncated decimal expansion of v in [0,1), `digits` fractional digits.
std::string to_decimal(const BigRat& v, int digits);
// Exact truncated scientific form for small nonnegative rationals, e.g. "3.38e-15".
std::string sci_string(const BigRat& v, int sig_digits);
std::string format_value(const TorusValue& v, int digits = 30);

}  // namespace torus
