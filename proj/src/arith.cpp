#include "torus/arith.hpp"

#include <cctype>
#include <cmath>
#include <utility>
#include <vector>

namespace torus {

BigInt pow2(int bits) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    return r;
}

// The mpz string constructor auto-detects the base, so "025" would be octal;
// digit strings from user input always go through this base-10 parser.
BigInt parse_digits(const std::string& s) {
    if (s.empty()) throw precondition_error("parse: empty number");
    BigInt r;
    if (mpz_set_str(r.get_mpz_t(), s.c_str(), 10) != 0)
        throw precondition_error("parse: not a base-10 number: " + s);
    return r;
}

BigRat make_rat(const BigInt& num, const BigInt& den) {
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

BigRat mod1(const BigRat& v) {
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    return v - BigRat(fl);
}

BigRat rat_dist_to_int(const BigRat& v) {
    BigRat f = mod1(v);
    BigRat other = 1 - f;
    return f < other ? f : other;
}

int ceil_log2(const BigRat& v) {
    if (v < 1) throw precondition_error("ceil_log2: argument < 1");
    // smallest k with 2^k >= v, i.e. den * 2^k >= num
    const BigInt& num = v.get_num();
    const BigInt& den = v.get_den();
    int k = 0;
    BigInt scaled = den;
    while (scaled < num) {
        scaled <<= 1;
        ++k;
    }
    return k;
}

int choose_bits(const BigInt& s_max, const BigRat& eps_target) {
    if (s_max < 1) throw precondition_error("choose_bits: s_max < 1");
    if (eps_target <= 0 || eps_target >= 1)
        throw precondition_error("choose_bits: eps_target outside (0,1)");
    return ceil_log2(BigRat(s_max)) + ceil_log2(1 / eps_target) + 8;
}

// ---------------------------------------------------------------------------

Rat::Rat(const BigInt& num, const BigInt& den) {
    if (den <= 0) throw precondition_error("Rat: denominator must be positive");
    v_ = mod1(make_rat(num, den));
}

Rat Rat::mul_int(const BigInt& k) const {
    if (k < 1) throw precondition_error("mul_int: k must be >= 1");
    return Rat(BigRat(v_ * BigRat(k)));
}

// ---------------------------------------------------------------------------

FixedReal::FixedReal(BigInt mantissa, int bits, BigInt err_mult)
    : m_(std::move(mantissa)), bits_(bits), err_(std::move(err_mult)) {
    check();
}

void FixedReal::check() const {
    if (bits_ <= 0) throw precondition_error("FixedReal: bits must be positive");
    if (m_ < 0 || m_ >= pow2(bits_))
        throw precondition_error("FixedReal: mantissa out of range");
    if (err_ < 1) throw precondition_error("FixedReal: err_mult must be >= 1");
    // err_mult * 2^-B < 1/4
    if ((err_ << 2) >= pow2(bits_))
        throw precision_exhausted("FixedReal: error bound reached 1/4; raise B");
}

FixedReal FixedReal::from_rat(const Rat& r, int bits) {
    BigInt m;
    BigInt scaled = r.num() * pow2(bits);
    mpz_fdiv_q(m.get_mpz_t(), scaled.get_mpz_t(), r.den().get_mpz_t());
    return FixedReal(m, bits, 1);
}

FixedReal FixedReal::sqrt_frac(const BigInt& n, int bits) {
    if (n <= 0) throw precondition_error("sqrt: argument must be positive");
    if (mpz_perfect_square_p(n.get_mpz_t()))
        throw precondition_error("sqrt: perfect square yields a rational; use p/q form");
    BigInt full, ip;
    BigInt shifted = n << (2 * bits);
    mpz_sqrt(full.get_mpz_t(), shifted.get_mpz_t());  // floor(sqrt(n)*2^bits)
    mpz_sqrt(ip.get_mpz_t(), n.get_mpz_t());          // floor(sqrt(n))
    return FixedReal(full - (ip << bits), bits, 1);
}

FixedReal FixedReal::mul_int(const BigInt& k) const {
    if (k < 1) throw precondition_error("mul_int: k must be >= 1");
    BigInt m = m_ * k;
    mpz_fdiv_r(m.get_mpz_t(), m.get_mpz_t(), pow2(bits_).get_mpz_t());
    return FixedReal(m, bits_, err_ * k);
}

FixedReal FixedReal::add_rat(const Rat& r) const {
    BigInt add;
    BigInt scaled = r.num() * pow2(bits_);
    mpz_fdiv_q(add.get_mpz_t(), scaled.get_mpz_t(), r.den().get_mpz_t());
    bool inexact = add * r.den() != scaled;
    BigInt m = m_ + add;
    mpz_fdiv_r(m.get_mpz_t(), m.get_mpz_t(), pow2(bits_).get_mpz_t());
    return FixedReal(m, bits_, err_ + (inexact ? 1 : 0));
}

FixedReal FixedReal::add(const FixedReal& o) const {
    if (bits_ != o.bits_) throw precondition_error("FixedReal::add: bit widths differ");
    BigInt m = m_ + o.m_;
    mpz_fdiv_r(m.get_mpz_t(), m.get_mpz_t(), pow2(bits_).get_mpz_t());
    return FixedReal(m, bits_, err_ + o.err_);
}

// ---------------------------------------------------------------------------

bool is_exact(const TorusValue& v) { return std::holds_alternative<Rat>(v); }

bool same_tag(const TorusValue& a, const TorusValue& b) {
    return a.index() == b.index();
}

BigRat center(const TorusValue& v) {
    if (is_exact(v)) return std::get<Rat>(v).value();
    return std::get<FixedReal>(v).center();
}

BigRat err_bound(const TorusValue& v) {
    if (is_exact(v)) return BigRat(0);
    return std::get<FixedReal>(v).err_bound();
}

TorusValue mul_int(const TorusValue& v, const BigInt& k) {
    if (is_exact(v)) return std::get<Rat>(v).mul_int(k);
    return std::get<FixedReal>(v).mul_int(k);
}

TorusValue promote(const TorusValue& v, int bits) {
    if (is_exact(v)) return FixedReal::from_rat(std::get<Rat>(v), bits);
    if (std::get<FixedReal>(v).bits() != bits)
        throw precondition_error("promote: FixedReal bit width mismatch");
    return v;
}

static RatInterval clamp_dist(const BigRat& c, const BigRat& e) {
    BigRat lo = c - e, hi = c + e;
    if (lo < 0) lo = 0;
    BigRat half(1, 2);
    if (hi > half) hi = half;
    return {lo, hi};
}

RatInterval dist_to_int(const TorusValue& v) {
    if (is_exact(v)) return RatInterval::exact(rat_dist_to_int(std::get<Rat>(v).value()));
    const auto& f = std::get<FixedReal>(v);
    return clamp_dist(rat_dist_to_int(f.center()), f.err_bound());
}

// ---------------------------------------------------------------------------

TorusPoint::TorusPoint(TorusValue px, TorusValue py) : x(std::move(px)), y(std::move(py)) {
    if (!same_tag(x, y))
        throw precondition_error("TorusPoint: coordinates must share one backend");
    if (!is_exact(x) &&
        std::get<FixedReal>(x).bits() != std::get<FixedReal>(y).bits())
        throw precondition_error("TorusPoint: coordinate bit widths differ");
}

TorusPoint mul_point(const TorusPoint& a, const BigInt& k) {
    return TorusPoint(mul_int(a.x, k), mul_int(a.y, k));
}

TorusPoint promote_point(const TorusPoint& a, int bits) {
    return TorusPoint(promote(a.x, bits), promote(a.y, bits));
}

CertScalar linear_form(const BigInt& m, const TorusValue& x, const BigInt& n,
                       const TorusValue& y) {
    if (!same_tag(x, y)) throw precondition_error("linear_form: mixed backends");
    if (is_exact(x)) {
        BigRat c = BigRat(m) * std::get<Rat>(x).value() +
                   BigRat(n) * std::get<Rat>(y).value();
        return {c, BigRat(0)};
    }
    const auto& fx = std::get<FixedReal>(x);
    const auto& fy = std::get<FixedReal>(y);
    if (fx.bits() != fy.bits()) throw precondition_error("linear_form: bit widths differ");
    BigInt num = m * fx.mantissa() + n * fy.mantissa();
    BigInt errnum = abs(m) * fx.err_mult() + abs(n) * fy.err_mult();
    BigInt den = pow2(fx.bits());
    return {make_rat(num, den), make_rat(errnum, den)};
}

RatInterval dist_to_int(const CertScalar& s) {
    return clamp_dist(rat_dist_to_int(s.center), s.err);
}

// ---------------------------------------------------------------------------

RatInterval coord_distance(const TorusValue& a, const TorusValue& b) {
    if (!same_tag(a, b)) throw precondition_error("coord_distance: mixed backends");
    if (is_exact(a)) {
        BigRat d = rat_dist_to_int(std::get<Rat>(a).value() - std::get<Rat>(b).value());
        return RatInterval::exact(d);
    }
    const auto& fa = std::get<FixedReal>(a);
    const auto& fb = std::get<FixedReal>(b);
    if (fa.bits() != fb.bits())
        throw precondition_error("coord_distance: bit widths differ");
    BigRat c = rat_dist_to_int(make_rat(fa.mantissa() - fb.mantissa(), pow2(fa.bits())));
    return clamp_dist(c, fa.err_bound() + fb.err_bound());
}

TorusDistance torus_distance(const TorusPoint& a, const TorusPoint& b) {
    RatInterval dx = coord_distance(a.x, b.x);
    RatInterval dy = coord_distance(a.y, b.y);
    return {RatInterval{dx.lo * dx.lo + dy.lo * dy.lo, dx.hi * dx.hi + dy.hi * dy.hi}};
}

double TorusDistance::lower() const {
    double v = std::sqrt(squared.lo.get_d());
    return std::max(0.0, v * (1.0 - 4e-16));
}

double TorusDistance::upper() const {
    double v = std::sqrt(squared.hi.get_d());
    return v * (1.0 + 4e-16) + 5e-324;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

TorusValue parse_term(const std::string& t, int bits) {
    if (t.rfind("sqrt(", 0) == 0 && t.back() == ')') {
        std::string inner = t.substr(5, t.size() - 6);
        if (!all_digits(inner)) throw precondition_error("parse: malformed sqrt term: " + t);
        return FixedReal::sqrt_frac(parse_digits(inner), bits);
    }
    auto slash = t.find('/');
    if (slash != std::string::npos) {
        std::string ns = t.substr(0, slash), ds = t.substr(slash + 1);
        if (!all_digits(ns) || !all_digits(ds))
            throw precondition_error("parse: malformed fraction: " + t);
        BigInt den = parse_digits(ds);
        if (den == 0) throw precondition_error("parse: zero denominator: " + t);
        return Rat(parse_digits(ns), den);
    }
    auto dot = t.find('.');
    if (dot != std::string::npos) {
        std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!all_digits(ip) || !all_digits(fp))
            throw precondition_error("parse: malformed decimal: " + t);
        BigInt num = parse_digits(ip + fp);
        BigInt den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
        return FixedReal::from_rat(Rat(num, den), bits);
    }
    if (!all_digits(t)) throw precondition_error("parse: malformed value: " + t);
    return Rat(parse_digits(t), BigInt(1));
}

}  // namespace

TorusValue parse_value(const std::string& text, int bits) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw precondition_error("parse: empty value");
    if (s[0] == '-') throw precondition_error("parse: negative values are rejected");

    // split into signed terms at top level (sqrt(..) contains no +/-)
    std::vector<std::pair<int, std::string>> terms;
    size_t start = 0;
    int sign = +1;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == '+' || s[i] == '-') {
            if (i == start) throw precondition_error("parse: malformed value: " + text);
            terms.emplace_back(sign, s.substr(start, i - start));
            if (i < s.size()) sign = (s[i] == '+') ? +1 : -1;
            start = i + 1;
        }
    }

    bool any_inexact = false;
    std::vector<std::pair<int, TorusValue>> parsed;
    for (auto& [sg, ts] : terms) {
        parsed.emplace_back(sg, parse_term(ts, bits));
        if (!is_exact(parsed.back().second)) any_inexact = true;
    }

    if (!any_inexact) {
        BigRat acc(0);
        for (auto& [sg, v] : parsed) acc += sg * std::get<Rat>(v).value();
        return Rat(acc);
    }
    // fixed-point accumulation: mantissas add exactly; each rational term
    // contributes at most one ulp of rounding
    std::optional<FixedReal> acc;
    auto fold = [&](int sg, const FixedReal& f) {
        FixedReal term = sg > 0 ? f
                                : FixedReal((pow2(bits) - f.mantissa()) % pow2(bits),
                                            bits, f.err_mult());
        acc = acc ? acc->add(term) : term;
    };
    for (auto& [sg, v] : parsed) {
        if (is_exact(v))
            fold(sg, FixedReal::from_rat(std::get<Rat>(v), bits));
        else
            fold(sg, std::get<FixedReal>(v));
    }
    return *acc;
}

TorusPoint parse_point(const std::string& text, int bits) {
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw precondition_error("parse: point must be \"x,y\"");
    TorusValue x = parse_value(text.substr(0, comma), bits);
    TorusValue y = parse_value(text.substr(comma + 1), bits);
    if (!same_tag(x, y)) {
        x = promote(x, bits);
        y = promote(y, bits);
    }
    return TorusPoint(std::move(x), std::move(y));
}

// ---------------------------------------------------------------------------
// Deterministic printing (pure integer arithmetic, no floating point)

std::string to_decimal(const BigRat& v, int digits) {
    if (v < 0 || v >= 1) throw precondition_error("to_decimal: value outside [0,1)");
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    BigInt d;
    BigInt num = v.get_num() * scale;
    mpz_fdiv_q(d.get_mpz_t(), num.get_mpz_t(), v.get_den_mpz_t());
    std::string frac = d.get_str();
    if (static_cast<int>(frac.size()) < digits)
        frac = std::string(digits - frac.size(), '0') + frac;
    return "0." + frac;
}

std::string sci_string(const BigRat& v, int sig_digits) {
    if (v < 0) throw precondition_error("sci_string: negative value");
    if (v == 0) return "0";
    // find e with 10^e <= v < 10^(e+1)
    int e = 0;
    BigRat t = v;
    while (t < 1) {
        t *= 10;
        --e;
    }
    while (t >= 10) {
        t /= 10;
        ++e;
    }
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(sig_digits - 1));
    BigInt d;
    BigRat scaled = t * BigRat(scale);
    mpz_fdiv_q(d.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    std::string digits = d.get_str();
    std::string out = digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(e);
    return out;
}

std::string format_value(const TorusValue& v, int digits) {
    if (is_exact(v)) {
        const Rat& r = std::get<Rat>(v);
        return r.num().get_str() + "/" + r.den().get_str();
    }
    return to_decimal(std::get<FixedReal>(v).center(), digits);
}

}  // namespace torus
