#include "torus/density.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace torus {

namespace {

unsigned cell_of(const TorusValue& v, unsigned g) {
    if (is_exact(v)) {
        const Rat& r = std::get<Rat>(v);
        BigInt c;
        BigInt num = r.num() * g;
        mpz_fdiv_q(c.get_mpz_t(), num.get_mpz_t(), r.den().get_mpz_t());
        return static_cast<unsigned>(c.get_ui());
    }
    const auto& f = std::get<FixedReal>(v);
    BigInt c = (f.mantissa() * g) >> f.bits();
    return static_cast<unsigned>(c.get_ui());
}

}  // namespace

GridStats grid_coverage(const std::vector<OrbitSample>& samples, unsigned g, int threads) {
    if (g < 1) throw precondition_error("grid_coverage: G must be >= 1");
    if (g > 8192) throw precondition_error("grid_coverage: G too large");
    BigRat guard = make_rat(BigInt(1), BigInt(4UL * g));
    for (const auto& s : samples)
        if (err_bound(s.point.x) >= guard || err_bound(s.point.y) >= guard)
            throw precision_exhausted("grid_coverage: sample error too coarse for this grid");

    GridStats st;
    st.g = g;
    st.total = samples.size();
    st.hist.assign(static_cast<size_t>(g) * g, 0);

    if (threads <= 1) {
        for (const auto& s : samples) {
            unsigned cx = cell_of(s.point.x, g);
            unsigned cy = cell_of(s.point.y, g);
            st.hist[static_cast<size_t>(cy) * g + cx] += 1;
        }
    } else {
        // per-thread histograms merged by integer addition: order-independent
        std::vector<std::vector<uint32_t>> partial(threads);
#pragma omp parallel num_threads(threads)
        {
            int tid = omp_get_thread_num();
            auto& local = partial[tid];
            local.assign(static_cast<size_t>(g) * g, 0);
#pragma omp for schedule(static)
            for (size_t i = 0; i < samples.size(); ++i) {
                unsigned cx = cell_of(samples[i].point.x, g);
                unsigned cy = cell_of(samples[i].point.y, g);
                local[static_cast<size_t>(cy) * g + cx] += 1;
            }
        }
        for (const auto& local : partial) {
            if (local.empty()) continue;
            for (size_t i = 0; i < st.hist.size(); ++i) st.hist[i] += local[i];
        }
    }

    for (uint32_t c : st.hist)
        if (c == 0) ++st.empty_cells;
    double cells = static_cast<double>(g) * g;
    st.coverage = 1.0 - static_cast<double>(st.empty_cells) / cells;
    if (st.total > 0) {
        double uniform = 1.0 / cells;
        for (uint32_t c : st.hist)
            st.max_deviation = std::max(
                st.max_deviation,
                std::abs(static_cast<double>(c) / static_cast<double>(st.total) - uniform));
    }
    return st;
}

double covering_radius_estimate(const std::vector<OrbitSample>& samples, unsigned g,
                                int threads) {
    if (g < 8) throw precondition_error("covering_radius_estimate: G must be >= 8");
    if (samples.empty())
        throw precondition_error("covering_radius_estimate: no samples");

    std::vector<double> xs(samples.size()), ys(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        xs[i] = center(samples[i].point.x).get_d();
        ys[i] = center(samples[i].point.y).get_d();
    }

    double worst = 0;
#pragma omp parallel for num_threads(threads) if (threads > 1) schedule(static) \
    reduction(max : worst)
    for (unsigned ij = 0; ij < g * g; ++ij) {
        double cx = (ij % g + 0.5) / g;
        double cy = (ij / g + 0.5) / g;
        double best = std::numeric_limits<double>::infinity();
        for (size_t s = 0; s < xs.size(); ++s) {
            double dx = std::abs(cx - xs[s]);
            if (dx > 0.5) dx = 1.0 - dx;
            double dy = std::abs(cy - ys[s]);
            if (dy > 0.5) dy = 1.0 - dy;
            double d2 = dx * dx + dy * dy;
            if (d2 < best) best = d2;
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst) + std::sqrt(2.0) / g;
}

namespace {

// center of dist(v - t) where t is promoted to v's backend
BigRat coord_target_dist(const TorusValue& v, const TorusValue& t) {
    return rat_dist_to_int(center(v) - center(t));
}

BigRat coord_target_err(const TorusValue& v, const TorusValue& t) {
    return err_bound(v) + err_bound(t);
}

}  // namespace

ApproxRecord best_approx(const TorusPoint& start, const TorusPoint& target,
                         const GeneratorSet& g, const BigInt& s_max, int threads,
                         std::vector<ApproxImprovement>* trace) {
    std::vector<OrbitSample> samples = enumerate_orbit(start, g, s_max, threads);
    TorusPoint tgt = start.exact()
                         ? target
                         : promote_point(target, std::get<FixedReal>(start.x).bits());
    if (start.exact() && !target.exact())
        throw precondition_error("best_approx: exact start needs an exact target");

    std::vector<BigRat> score(samples.size());
#pragma omp parallel for num_threads(threads) if (threads > 1) schedule(static)
    for (size_t i = 0; i < samples.size(); ++i) {
        BigRat dx = coord_target_dist(samples[i].point.x, tgt.x);
        BigRat dy = coord_target_dist(samples[i].point.y, tgt.y);
        score[i] = std::max(dx, dy);
    }

    size_t arg = 0;
    for (size_t i = 1; i < samples.size(); ++i)
        if (score[i] < score[arg]) arg = i;

    if (trace) {
        BigRat cur(-1);
        for (size_t i = 0; i < samples.size(); ++i)
            if (cur < 0 || score[i] < cur) {
                cur = score[i];
                trace->push_back({samples[i].triple, cur});
            }
    }

    ApproxRecord rec;
    rec.best = score[arg];
    rec.best_err = std::max(coord_target_err(samples[arg].point.x, tgt.x),
                            coord_target_err(samples[arg].point.y, tgt.y));
    rec.argmin = samples[arg].triple;
    rec.s_max = s_max;
    return rec;
}

std::vector<LittlewoodRecord> littlewood_track(const TorusPoint& start,
                                               const GeneratorSet& g,
                                               const BigInt& s_max, WeightFn f) {
    std::vector<OrbitSample> samples = enumerate_orbit(start, g, s_max);
    std::vector<LittlewoodRecord> out;
    out.reserve(samples.size());
    double running = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        LittlewoodRecord r;
        r.triple = s.triple;
        unsigned long prod_exp = 1;
        bool all_pos = true;
        for (unsigned e : s.triple.e) {
            prod_exp *= e;
            if (e == 0) all_pos = false;
        }
        r.weight = (f == WeightFn::log_product)
                       ? std::log(static_cast<double>(prod_exp) + 2.0)
                       : 1.0;
        // exact-zero distances survive the double conversion exactly
        r.dist_x = rat_dist_to_int(center(s.point.x)).get_d();
        r.dist_y = rat_dist_to_int(center(s.point.y)).get_d();
        r.product = r.weight * r.dist_x * r.dist_y;
        r.included = all_pos;
        if (all_pos) running = std::min(running, r.product);
        r.running_min = running;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace torus
