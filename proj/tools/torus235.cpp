// torus235 - command line front end: orbits of multiplicative semigroup actions
// on the 2-torus, their density and direction statistics, and the supporting
// constructions (gap function, pair-selection rule, rhombus set, tracking).
//
// Exit codes: 0 success, 1 usage or I/O error, 2 precondition violation,
// 3 precision exhausted.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "torus/arith.hpp"
#include "torus/density.hpp"
#include "torus/directions.hpp"
#include "torus/geometry.hpp"
#include "torus/invariant.hpp"
#include "torus/orbit.hpp"
#include "torus/report.hpp"
#include "torus/selection.hpp"
#include "torus/smooth.hpp"

using namespace torus;

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
    char b[64];
    std::snprintf(b, sizeof b, spec, v);
    return b;
}

BigInt parse_bigint_flag(const std::string& s) {
    if (s.find('e') != std::string::npos || s.find('E') != std::string::npos ||
        s.find('.') != std::string::npos) {
        double v = std::stod(s);
        if (!(v >= 1) || v > 9e15 || v != std::floor(v))
            throw precondition_error("not an exact integer: " + s);
        return BigInt(fmt(v, "%.0f"));
    }
    return parse_digits(s);
}

// unreduced ratio: "p/q", decimal, or scientific like "1e-5"
BigRat parse_ratio(const std::string& s) {
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        std::string mant = s.substr(0, epos);
        long ex = std::stol(s.substr(epos + 1));
        BigRat v = parse_ratio(mant.empty() ? "1" : mant);
        BigInt p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(ex)));
        if (ex >= 0)
            v *= BigRat(p10);
        else
            v /= BigRat(p10);
        return v;
    }
    auto slash = s.find('/');
    if (slash != std::string::npos)
        return make_rat(parse_digits(s.substr(0, slash)), parse_digits(s.substr(slash + 1)));
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        BigInt den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
        return make_rat(parse_digits(ip + fp), den);
    }
    return BigRat(parse_digits(s));
}

// flags that are torus quantities in [0,1) reduce mod 1 at the end
Rat parse_rat_flag(const std::string& s) { return Rat(parse_ratio(s)); }

GeneratorSet parse_generators(const std::string& s) {
    std::vector<unsigned long> g;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) g.push_back(std::stoul(tok));
    return GeneratorSet(g);
}

std::string join_gens(const std::vector<unsigned long>& g, char sep = ';') {
    std::string out;
    for (size_t i = 0; i < g.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(g[i]);
    }
    return out;
}

std::string exp_header(const GeneratorSet& g) {
    std::string h;
    for (size_t i = 0; i < g.size(); ++i) {
        if (i) h += ",";
        h += "k" + std::to_string(g.gens[i]);
    }
    return h;
}

std::string exp_row(const ExpVec& t) {
    std::string r;
    for (size_t i = 0; i < t.e.size(); ++i) {
        if (i) r += ",";
        r += std::to_string(t.e[i]);
    }
    return r;
}

std::string errbound_string(const TorusPoint& p) {
    BigRat e = std::max(err_bound(p.x), err_bound(p.y));
    return e == 0 ? "0" : sci_string(e, 3);
}

struct Common {
    std::string start_text;
    std::string smax_text = "1000000";
    std::string generators_text = "2,3,5";
    std::string backend = "auto";  // auto | exact | fixed
    int bits = 0;                  // 0 = derive from s_max and eps
    std::string eps_text = "1e-12";
    int threads = 1;
};

void add_common(CLI::App* sub, Common& c, bool with_start = true) {
    if (with_start)
        sub->add_option("--start", c.start_text, "start point \"x,y\"")->required();
    sub->add_option("--smax", c.smax_text, "largest multiplier (e.g. 1e9)");
    sub->add_option("--generators", c.generators_text, "comma list, default 2,3,5");
    sub->add_option("--backend", c.backend, "auto|exact|fixed");
    sub->add_option("--bits", c.bits, "fixed-point bits (default: derived)");
    sub->add_option("--eps-target", c.eps_text, "target error bound for derived bits");
    sub->add_option("--threads", c.threads, "worker threads (default 1)");
}

struct Resolved {
    TorusPoint start;
    GeneratorSet gens;
    BigInt s_max;
    int bits;
};

Resolved resolve(const Common& c) {
    BigInt s_max = parse_bigint_flag(c.smax_text);
    int bits = c.bits;
    if (bits == 0) bits = choose_bits(s_max, parse_rat_flag(c.eps_text).value());
    TorusPoint p = parse_point(c.start_text, bits);
    if (c.backend == "fixed" && p.exact()) p = promote_point(p, bits);
    if (c.backend == "exact" && !p.exact())
        throw precondition_error("start is not exactly representable; use --backend fixed");
    return Resolved{std::move(p), parse_generators(c.generators_text), std::move(s_max), bits};
}

Manifest make_manifest(const std::string& sub, int argc, char** argv,
                       const Resolved* r, std::optional<uint64_t> seed,
                       std::chrono::steady_clock::time_point t0) {
    Manifest m;
    m.subcommand = sub;
    std::string args;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) args += " ";
        args += argv[i];
    }
    m.arguments = args;
    if (r) {
        m.backend = r->start.exact() ? "exact" : "fixed";
        m.bits = r->start.exact() ? 0 : r->bits;
        m.s_max = r->s_max.get_str();
    }
    if (seed) {
        m.seed = *seed;
        m.has_seed = true;
    }
    m.version = kToolVersion;
    m.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    auto t0 = std::chrono::steady_clock::now();
    CLI::App app{"orbits of times-k actions on the 2-torus"};
    app.require_subcommand(1);

    // --- orbit ---
    Common orbit_c;
    std::string orbit_out;
    bool orbit_distinct = false;
    auto* orbit_cmd = app.add_subcommand("orbit", "enumerate orbit samples to CSV");
    add_common(orbit_cmd, orbit_c);
    orbit_cmd->add_option("--out", orbit_out, "output CSV")->required();
    orbit_cmd->add_flag("--distinct", orbit_distinct, "drop duplicate points");

    // --- closure ---
    std::string closure_start, closure_gens = "2,3,5", closure_out;
    auto* closure_cmd = app.add_subcommand("closure", "exact finite closure of a rational start");
    closure_cmd->add_option("--start", closure_start)->required();
    closure_cmd->add_option("--generators", closure_gens);
    closure_cmd->add_option("--out", closure_out, "optional CSV");

    // --- classify ---
    Common classify_c;
    long classify_cbound = 50;
    std::string classify_tau;
    auto* classify_cmd = app.add_subcommand("classify", "orbit-closure trichotomy verdict");
    add_common(classify_cmd, classify_c);
    classify_cmd->add_option("--C", classify_cbound, "relation coefficient bound");
    classify_cmd->add_option("--tau", classify_tau, "relation residual tolerance");

    // --- gaps ---
    std::string gaps_gens = "2,3", gaps_out;
    std::vector<double> gaps_m;
    double gaps_from = -1, gaps_to = -1, gaps_step = 1;
    auto* gaps_cmd = app.add_subcommand("gaps", "log-semigroup gap function per window");
    gaps_cmd->add_option("--generators", gaps_gens);
    gaps_cmd->add_option("--M", gaps_m, "window starts (repeatable)");
    gaps_cmd->add_option("--M-from", gaps_from);
    gaps_cmd->add_option("--M-to", gaps_to);
    gaps_cmd->add_option("--M-step", gaps_step);
    gaps_cmd->add_option("--out", gaps_out, "output CSV");

    // --- threshold ---
    std::string thr_gens = "2,3", thr_delta = "0.05";
    double thr_mcap = 1000;
    auto* thr_cmd = app.add_subcommand("threshold", "smallest M with all windows delta-dense");
    thr_cmd->add_option("--delta", thr_delta)->required();
    thr_cmd->add_option("--generators", thr_gens);
    thr_cmd->add_option("--mcap", thr_mcap);

    // --- lemma235 ---
    std::string lem_r, lem_n = "1";
    unsigned lem_verify = 0;
    auto* lem_cmd = app.add_subcommand("lemma235", "pair selection for r outside Z/N");
    lem_cmd->add_option("--r", lem_r, "rational p/q")->required();
    lem_cmd->add_option("--N", lem_n);
    lem_cmd->add_option("--verify", lem_verify, "exact check up to this exponent bound");

    // --- line ---
    std::string line_spec, line_point, line_tol = "0";
    int line_bits = 128;
    auto* line_cmd = app.add_subcommand("line", "rational line queries");
    line_cmd->add_option("--line", line_spec, "\"a,b,c\"")->required();
    line_cmd->add_option("--point", line_point, "optional \"x,y\" membership test");
    line_cmd->add_option("--tol", line_tol);
    line_cmd->add_option("--bits", line_bits);

    // --- chcoords ---
    std::string ch_dir, ch_matrix, ch_point;
    int ch_bits = 128;
    auto* ch_cmd = app.add_subcommand("chcoords", "SL2(Z) coordinate changes");
    ch_cmd->add_option("--direction", ch_dir, "\"p,q\" -> matrix sending it horizontal");
    ch_cmd->add_option("--matrix", ch_matrix, "\"m11,m12,m21,m22\"");
    ch_cmd->add_option("--point", ch_point, "apply matrix to \"x,y\"");
    ch_cmd->add_option("--bits", ch_bits);

    // --- dirset ---
    Common dirset_c;
    unsigned dirset_qmax = 5;
    double dirset_eps = 0.02, dirset_theta = 0.02;
    long dirset_dmax = 100;
    std::string dirset_out;
    auto* dirset_cmd = app.add_subcommand("dirset", "local direction set estimates");
    add_common(dirset_cmd, dirset_c);
    dirset_cmd->add_option("--qmax", dirset_qmax, "anchor denominator bound");
    dirset_cmd->add_option("--eps", dirset_eps, "annulus radius");
    dirset_cmd->add_option("--theta-tol", dirset_theta, "cluster threshold (rad)");
    dirset_cmd->add_option("--dmax", dirset_dmax, "rationalization coefficient bound");
    dirset_cmd->add_option("--out", dirset_out, "output CSV")->required();

    // --- density ---
    Common density_c;
    unsigned density_grid = 8;
    std::string density_out, density_heatmap;
    auto* density_cmd = app.add_subcommand("density", "grid occupancy statistics");
    add_common(density_cmd, density_c);
    density_cmd->add_option("--grid", density_grid);
    density_cmd->add_option("--out", density_out, "stats CSV");
    density_cmd->add_option("--heatmap", density_heatmap, "PGM heatmap path");

    // --- approx ---
    Common approx_c;
    std::string approx_target, approx_out;
    auto* approx_cmd = app.add_subcommand("approx", "best simultaneous approximation to a target");
    add_common(approx_cmd, approx_c);
    approx_cmd->add_option("--target", approx_target, "\"a,b\"")->required();
    approx_cmd->add_option("--out", approx_out, "improvements CSV");

    // --- littlewood ---
    Common lw_c;
    std::string lw_f = "log-product", lw_out;
    auto* lw_cmd = app.add_subcommand("littlewood", "weighted product statistic along the orbit");
    add_common(lw_cmd, lw_c);
    lw_cmd->add_option("--f", lw_f, "log-product|constant-1");
    lw_cmd->add_option("--out", lw_out, "output CSV");

    // --- ppcheck ---
    std::string pp_delta = "1e-5";
    unsigned pp_n = 7;
    std::string pp_samples = "1e6";
    uint64_t pp_seed = 42;
    int pp_threads = 1;
    std::string pp_out;
    auto* pp_cmd = app.add_subcommand("ppcheck", "randomized pre-image property check");
    pp_cmd->add_option("--delta", pp_delta);
    pp_cmd->add_option("--N", pp_n);
    pp_cmd->add_option("--samples", pp_samples);
    pp_cmd->add_option("--seed", pp_seed);
    pp_cmd->add_option("--threads", pp_threads);
    pp_cmd->add_option("--out", pp_out, "report CSV");

    // --- track ---
    Common track_c;
    std::string track_triple, track_delta = "1e-5", track_out;
    unsigned track_n = 7;
    auto* track_cmd = app.add_subcommand("track", "pre-image tracking trace");
    add_common(track_cmd, track_c);
    track_cmd->add_option("--triple", track_triple, "exponents, e.g. \"2,1,0\"")->required();
    track_cmd->add_option("--delta", track_delta);
    track_cmd->add_option("--N", track_n);
    track_cmd->add_option("--out", track_out, "output CSV")->required();

    // --- render ---
    std::string render_mode = "rhombus", render_out, render_delta = "0.02",
                render_format = "pgm";
    Common render_c;
    unsigned render_n = 5, render_grid = 512;
    auto* render_cmd = app.add_subcommand("render", "raster images (rhombus set / orbit density)");
    render_cmd->add_option("--mode", render_mode, "rhombus|density");
    render_cmd->add_option("--delta", render_delta);
    render_cmd->add_option("--N", render_n);
    render_cmd->add_option("--grid", render_grid);
    render_cmd->add_option("--format", render_format, "pgm|ppm");
    render_cmd->add_option("--start", render_c.start_text);
    render_cmd->add_option("--smax", render_c.smax_text);
    render_cmd->add_option("--generators", render_c.generators_text);
    render_cmd->add_option("--threads", render_c.threads);
    render_cmd->add_option("--out", render_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 1;
    }

    try {
        if (*orbit_cmd) {
            Resolved r = resolve(orbit_c);
            auto samples = enumerate_orbit(r.start, r.gens, r.s_max, orbit_c.threads);
            if (orbit_distinct) samples = distinct_samples(std::move(samples));
            auto f = open_out(orbit_out);
            f << exp_header(r.gens) << ",multiplier,x,y,errbound\n";
            for (const auto& s : samples)
                f << exp_row(s.triple) << "," << s.triple.multiplier.get_str() << ","
                  << format_value(s.point.x) << "," << format_value(s.point.y) << ","
                  << errbound_string(s.point) << "\n";
            write_manifest(orbit_out, make_manifest("orbit", argc, argv, &r, {}, t0));
            std::cout << "samples=" << samples.size() << " out=" << orbit_out << "\n";
        } else if (*closure_cmd) {
            TorusPoint start = parse_point(closure_start, 64);
            if (!start.exact())
                throw precondition_error("closure: start must be rational");
            GeneratorSet gens = parse_generators(closure_gens);
            auto pts = rational_closure(start, gens);
            std::cout << "closure_size=" << pts.size() << "\n";
            if (!closure_out.empty()) {
                auto f = open_out(closure_out);
                f << "x,y\n";
                for (const auto& p : pts)
                    f << format_value(p.x) << "," << format_value(p.y) << "\n";
                Manifest m = make_manifest("closure", argc, argv, nullptr, {}, t0);
                m.backend = "exact";
                write_manifest(closure_out, m);
            } else {
                for (const auto& p : pts)
                    std::cout << format_value(p.x) << "," << format_value(p.y) << "\n";
            }
        } else if (*classify_cmd) {
            int bits = classify_c.bits
                           ? classify_c.bits
                           : choose_bits(BigInt(4 * classify_cbound),
                                         parse_rat_flag(classify_c.eps_text).value());
            TorusPoint p = parse_point(classify_c.start_text, bits);
            if (classify_c.backend == "fixed" && p.exact()) p = promote_point(p, bits);
            GeneratorSet gens = parse_generators(classify_c.generators_text);
            BigRat tau = classify_tau.empty() ? relation_tolerance(p, classify_cbound)
                                              : parse_rat_flag(classify_tau).value();
            ClosureClass cls = classify(p, gens, classify_cbound, tau);
            if (auto* fin = std::get_if<FiniteClass>(&cls)) {
                std::cout << "Finite (exact), " << fin->points.size() << " points\n";
            } else if (auto* lu = std::get_if<LineUnionClass>(&cls)) {
                std::cout << "LineUnion ("
                          << (lu->certainty == Certainty::exact ? "exact" : "bounded-search")
                          << "), relation " << lu->relation.m << "," << lu->relation.n
                          << "," << lu->relation.k.get_str() << "\n";
            } else {
                std::cout << "Dense (bounded-search), no relation with coefficients <= "
                          << classify_cbound << "\n";
            }
        } else if (*gaps_cmd) {
            GeneratorSet gens = parse_generators(gaps_gens);
            std::vector<double> ms = gaps_m;
            if (gaps_from >= 0 && gaps_to >= gaps_from)
                for (double m = gaps_from; m <= gaps_to; m += gaps_step) ms.push_back(m);
            if (ms.empty()) throw precondition_error("gaps: give --M or --M-from/--M-to");
            std::ostream* os = &std::cout;
            std::ofstream f;
            if (!gaps_out.empty()) {
                f = open_out(gaps_out);
                os = &f;
            }
            *os << "M,count,max_gap,generators\n";
            for (double m : ms) {
                GapReport rep = log_gap(m, gens, m + 1);
                *os << fmt(m, "%.6g") << "," << rep.count << "," << fmt(rep.max_gap, "%.15g")
                    << "," << join_gens(rep.generators) << "\n";
            }
            if (!gaps_out.empty())
                write_manifest(gaps_out, make_manifest("gaps", argc, argv, nullptr, {}, t0));
        } else if (*thr_cmd) {
            GeneratorSet gens = parse_generators(thr_gens);
            Rat delta = parse_rat_flag(thr_delta);
            auto m = density_threshold(delta.value().get_d(), gens, thr_mcap);
            if (m)
                std::cout << "M=" << fmt(*m, "%.6g") << "\n";
            else
                std::cout << "not-found (certified only up to M_cap=" << fmt(thr_mcap, "%.6g")
                          << ")\n";
        } else if (*lem_cmd) {
            Rat r = parse_rat_flag(lem_r);
            BigInt n = parse_bigint_flag(lem_n);
            SelectionResult sel = select_pair(r, n);
            std::cout << "pair=" << sel.a << "," << sel.b << " witness=2^" << sel.k2
                      << "*3^" << sel.k3 << "*5^" << sel.k5 << "*" << sel.big_q.get_str()
                      << "\n";
            if (lem_verify > 0) {
                bool ok = verify_pair(r, n, sel.a, sel.b, lem_verify);
                std::cout << "verified=" << (ok ? "true" : "false")
                          << " bound=" << lem_verify << "\n";
                if (!ok) return 2;
            }
        } else if (*line_cmd) {
            std::stringstream ss(line_spec);
            std::string sa, sb, sc;
            std::getline(ss, sa, ',');
            std::getline(ss, sb, ',');
            std::getline(ss, sc);
            RationalLine l = make_line(std::stol(sa), std::stol(sb), parse_rat_flag(sc));
            Direction d = l.direction();
            std::cout << "line=" << l.a << "," << l.b << ","
                      << l.c.num().get_str() + "/" + l.c.den().get_str() << " direction="
                      << d.p << "," << d.q
                      << " covering_radius=" << fmt(covering_radius(d), "%.12g") << "\n";
            if (!line_point.empty()) {
                TorusPoint p = parse_point(line_point, line_bits);
                bool in = line_contains(l, p, parse_rat_flag(line_tol).value());
                std::cout << "contains=" << (in ? "true" : "false") << "\n";
            }
        } else if (*ch_cmd) {
            UniMatrix m;
            if (!ch_dir.empty()) {
                auto comma = ch_dir.find(',');
                Direction d = make_direction(std::stol(ch_dir.substr(0, comma)),
                                             std::stol(ch_dir.substr(comma + 1)));
                m = direction_to_horizontal(d);
                std::cout << "matrix=" << m.m11 << "," << m.m12 << "," << m.m21 << ","
                          << m.m22 << "\n";
            } else if (!ch_matrix.empty()) {
                std::stringstream ss(ch_matrix);
                long e[4];
                std::string tok;
                for (int i = 0; i < 4; ++i) {
                    std::getline(ss, tok, ',');
                    e[i] = std::stol(tok);
                }
                m = make_unimatrix(e[0], e[1], e[2], e[3]);
            } else {
                throw precondition_error("chcoords: give --direction or --matrix");
            }
            if (!ch_point.empty()) {
                TorusPoint p = parse_point(ch_point, ch_bits);
                TorusPoint q = apply_matrix(m, p);
                std::cout << "point=" << format_value(q.x) << "," << format_value(q.y)
                          << "\n";
            }
        } else if (*dirset_cmd) {
            Resolved r = resolve(dirset_c);
            auto samples = enumerate_orbit(r.start, r.gens, r.s_max, dirset_c.threads);
            auto ests = estimate_der_q(samples, dirset_qmax, dirset_eps, dirset_theta,
                                       dirset_c.threads, dirset_dmax);
            auto f = open_out(dirset_out);
            f << "anchor_x,anchor_y,cluster_angle,weight,rational_p,rational_q\n";
            for (const auto& est : ests)
                for (const auto& c : est.clusters) {
                    f << format_value(est.anchor.x) << "," << format_value(est.anchor.y)
                      << "," << fmt(c.mean_angle, "%.12f") << "," << c.weight << ",";
                    if (c.rational)
                        f << c.rational->p << "," << c.rational->q;
                    else
                        f << ",";
                    f << "\n";
                }
            write_manifest(dirset_out, make_manifest("dirset", argc, argv, &r, {}, t0));
            std::cout << "anchors_with_directions=" << ests.size() << " out=" << dirset_out
                      << "\n";
        } else if (*density_cmd) {
            Resolved r = resolve(density_c);
            auto samples = enumerate_orbit(r.start, r.gens, r.s_max, density_c.threads);
            GridStats st = grid_coverage(samples, density_grid, density_c.threads);
            std::cout << "G=" << st.g << " total=" << st.total << " coverage="
                      << fmt(st.coverage, "%.6f") << " empty=" << st.empty_cells
                      << " max_deviation=" << fmt(st.max_deviation, "%.8f") << "\n";
            if (!density_out.empty()) {
                auto f = open_out(density_out);
                f << "G,total,coverage,empty_cells,max_deviation\n";
                f << st.g << "," << st.total << "," << fmt(st.coverage, "%.6f") << ","
                  << st.empty_cells << "," << fmt(st.max_deviation, "%.8f") << "\n";
                write_manifest(density_out, make_manifest("density", argc, argv, &r, {}, t0));
            }
            if (!density_heatmap.empty()) {
                write_gray_raster(density_heatmap, st.g, st.hist, false);
                write_manifest(density_heatmap,
                               make_manifest("density", argc, argv, &r, {}, t0));
            }
        } else if (*approx_cmd) {
            Resolved r = resolve(approx_c);
            TorusPoint target = parse_point(approx_target, r.bits);
            std::vector<ApproxImprovement> trace;
            ApproxRecord rec = best_approx(r.start, target, r.gens, r.s_max,
                                           approx_c.threads, &trace);
            std::cout << "best=" << to_decimal(rec.best, 20)
                      << " errbound=" << (rec.best_err == 0 ? "0" : sci_string(rec.best_err, 3))
                      << " argmin=" << exp_row(rec.argmin) << " multiplier="
                      << rec.argmin.multiplier.get_str() << "\n";
            if (!approx_out.empty()) {
                auto f = open_out(approx_out);
                f << exp_header(r.gens) << ",multiplier,best\n";
                for (const auto& imp : trace)
                    f << exp_row(imp.triple) << "," << imp.triple.multiplier.get_str() << ","
                      << to_decimal(imp.best, 20) << "\n";
                write_manifest(approx_out, make_manifest("approx", argc, argv, &r, {}, t0));
            }
        } else if (*lw_cmd) {
            Resolved r = resolve(lw_c);
            WeightFn wf = lw_f == "constant-1" ? WeightFn::constant_one : WeightFn::log_product;
            if (lw_f != "constant-1" && lw_f != "log-product")
                throw precondition_error("littlewood: --f must be log-product or constant-1");
            auto recs = littlewood_track(r.start, r.gens, r.s_max, wf);
            std::ostream* os = &std::cout;
            std::ofstream f;
            if (!lw_out.empty()) {
                f = open_out(lw_out);
                os = &f;
            }
            *os << exp_header(r.gens) << ",multiplier,weight,dist_x,dist_y,product,included,running_min\n";
            for (const auto& rec : recs)
                *os << exp_row(rec.triple) << "," << rec.triple.multiplier.get_str() << ","
                    << fmt(rec.weight) << "," << fmt(rec.dist_x) << "," << fmt(rec.dist_y)
                    << "," << fmt(rec.product) << "," << (rec.included ? 1 : 0) << ","
                    << fmt(rec.running_min) << "\n";
            if (!lw_out.empty())
                write_manifest(lw_out, make_manifest("littlewood", argc, argv, &r, {}, t0));
        } else if (*pp_cmd) {
            RhombusSet e(parse_rat_flag(pp_delta), pp_n);
            BigInt samples_b = parse_bigint_flag(pp_samples);
            uint64_t samples = samples_b.get_ui();
            PpReport rep = check_preimage_property(e, samples, pp_seed, pp_threads);
            std::cout << "samples=" << rep.requested << " skipped_in_E=" << rep.skipped_in_e
                      << " checked=" << rep.checked << " violations=" << rep.violations
                      << " seed=" << rep.seed << "\n";
            if (!pp_out.empty()) {
                auto f = open_out(pp_out);
                f << "delta,N,samples,seed,skipped_in_e,checked,violations,counterexample_index\n";
                f << pp_delta << "," << pp_n << "," << rep.requested << "," << rep.seed << ","
                  << rep.skipped_in_e << "," << rep.checked << "," << rep.violations << ",";
                if (rep.counterexample) f << rep.counterexample->index;
                f << "\n";
                Manifest m = make_manifest("ppcheck", argc, argv, nullptr, pp_seed, t0);
                m.backend = "exact";
                write_manifest(pp_out, m);
            }
            if (rep.violations > 0) return 2;
        } else if (*track_cmd) {
            Resolved r = resolve(track_c);
            std::vector<unsigned> exps;
            {
                std::stringstream ss(track_triple);
                std::string tok;
                while (std::getline(ss, tok, ',')) exps.push_back(std::stoul(tok));
            }
            if (exps.size() != r.gens.size())
                throw precondition_error("track: triple arity must match generators");
            ExpVec t{exps, BigInt(1)};
            for (size_t i = 0; i < exps.size(); ++i)
                for (unsigned j = 0; j < exps[i]; ++j) t.multiplier *= r.gens.gens[i];
            OrbitSample sample{t, mul_point(r.start, t.multiplier)};
            RhombusSet e(parse_rat_flag(track_delta), track_n);
            auto steps = track_preimages(r.start, sample, e, r.gens);
            auto f = open_out(track_out);
            f << exp_header(r.gens) << ",multiplier,x,y,in_e,dist_l0,halved\n";
            for (const auto& st : steps) {
                const char* mem = st.in_e == Membership::in
                                      ? "in"
                                      : st.in_e == Membership::out ? "out" : "boundary";
                f << exp_row(st.triple) << "," << st.triple.multiplier.get_str() << ","
                  << format_value(st.point.x) << "," << format_value(st.point.y) << ","
                  << mem << "," << to_decimal(st.dist_l0.hi, 20) << ",";
                if (st.halved) f << (*st.halved ? 1 : 0);
                f << "\n";
            }
            write_manifest(track_out, make_manifest("track", argc, argv, &r, {}, t0));
            std::cout << "steps=" << steps.size() << " out=" << track_out << "\n";
        } else if (*render_cmd) {
            bool ppm = render_format == "ppm";
            if (render_mode == "rhombus") {
                RhombusSet e =
                    RhombusSet::for_visualization(parse_rat_flag(render_delta), render_n);
                unsigned g = render_grid;
                std::vector<uint32_t> hist(static_cast<size_t>(g) * g, 0);
                for (unsigned j = 0; j < g; ++j)
                    for (unsigned i = 0; i < g; ++i) {
                        Rat x(BigInt(2 * i + 1), BigInt(2UL * g));
                        Rat y(BigInt(2 * j + 1), BigInt(2UL * g));
                        TorusPoint p{TorusValue(x), TorusValue(y)};
                        if (in_rhombus_set(e, p) == Membership::in)
                            hist[static_cast<size_t>(j) * g + i] = 1;
                    }
                write_gray_raster(render_out, g, hist, ppm);
                Manifest m = make_manifest("render", argc, argv, nullptr, {}, t0);
                m.backend = "exact";
                write_manifest(render_out, m);
            } else if (render_mode == "density") {
                Resolved r = resolve(render_c);
                auto samples = enumerate_orbit(r.start, r.gens, r.s_max, render_c.threads);
                GridStats st = grid_coverage(samples, render_grid, render_c.threads);
                write_gray_raster(render_out, st.g, st.hist, ppm);
                write_manifest(render_out, make_manifest("render", argc, argv, &r, {}, t0));
            } else {
                throw precondition_error("render: --mode must be rhombus or density");
            }
            std::cout << "out=" << render_out << "\n";
        }
    } catch (const precision_exhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 3;
    } catch (const precondition_error& e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
