#include "torus/directions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace torus {

namespace {

// signed representative of a - b in [-1/2, 1/2) as a double
double centered_diff(const TorusValue& a, const TorusValue& b) {
    BigRat d = mod1(center(a) - center(b));
    if (d >= BigRat(1, 2)) d -= 1;
    return d.get_d();
}

struct AngleSample {
    double angle;  // in [0, pi)
};

}  // namespace

DirectionEstimate estimate_der(const TorusPoint& anchor,
                               const std::vector<OrbitSample>& samples, double epsilon,
                               double theta_tol, long rational_coeff_max) {
    if (!(epsilon > 0)) throw precondition_error("estimate_der: epsilon must be > 0");
    if (!(theta_tol > 0) || theta_tol >= M_PI / 8)
        throw precondition_error("estimate_der: theta_tol must be in (0, pi/8)");

    std::vector<double> angles;
    for (const auto& s : samples) {
        TorusPoint a = s.point.exact() ? anchor
                                       : promote_point(anchor, std::get<FixedReal>(s.point.x).bits());
        TorusDistance d = torus_distance(s.point, a);
        if (!(d.upper() <= epsilon) || !(d.lower() > 0)) continue;
        double dx = centered_diff(s.point.x, a.x);
        double dy = centered_diff(s.point.y, a.y);
        double ang = std::atan2(dy, dx);
        if (ang < 0) ang += M_PI;            // mod pi
        if (ang >= M_PI) ang -= M_PI;
        angles.push_back(ang);
    }

    DirectionEstimate est{anchor, {}, epsilon, theta_tol};
    if (angles.empty()) return est;
    std::sort(angles.begin(), angles.end());

    // single linkage on the circle of circumference pi: cut at gaps > theta_tol;
    // if no gap exceeds the threshold everything is one cluster
    size_t n = angles.size();
    size_t start = 0;
    double wrap_gap = angles.front() + M_PI - angles.back();
    bool wrap_merges = (n > 1) && wrap_gap <= theta_tol;
    std::vector<std::pair<size_t, size_t>> runs;  // [first, last] index ranges
    for (size_t i = 0; i + 1 < n; ++i) {
        if (angles[i + 1] - angles[i] > theta_tol) {
            runs.emplace_back(start, i);
            start = i + 1;
        }
    }
    runs.emplace_back(start, n - 1);
    if (wrap_merges && runs.size() > 1) {
        // glue last run onto the first across the 0/pi seam
        auto last = runs.back();
        runs.pop_back();
        runs.front() = {last.first, runs.front().second + n};  // virtual wrap indexing
    }

    for (auto [lo, hi] : runs) {
        double sx = 0, sy = 0;
        uint64_t w = 0;
        for (size_t i = lo; i <= hi; ++i) {
            double a2 = 2 * angles[i % n];  // doubled angles remove the mod-pi seam
            sx += std::cos(a2);
            sy += std::sin(a2);
            ++w;
        }
        double mean = 0.5 * std::atan2(sy, sx);
        if (mean < 0) mean += M_PI;
        DirCluster c;
        c.mean_angle = mean;
        c.weight = w;
        SlopeVerdict v = rationalize_slope(std::cos(mean), std::sin(mean),
                                           rational_coeff_max, theta_tol);
        if (v.rational) c.rational = v.dir;
        est.clusters.push_back(std::move(c));
    }
    std::sort(est.clusters.begin(), est.clusters.end(),
              [](const DirCluster& a, const DirCluster& b) {
                  return a.mean_angle < b.mean_angle;
              });
    return est;
}

std::vector<DirectionEstimate> estimate_der_q(const std::vector<OrbitSample>& samples,
                                              unsigned q_max, double epsilon,
                                              double theta_tol, int threads,
                                              long rational_coeff_max) {
    if (q_max < 1) throw precondition_error("estimate_der_q: q_max must be >= 1");
    if (!(epsilon > 0)) throw precondition_error("estimate_der_q: epsilon must be > 0");
    if (!(theta_tol > 0) || theta_tol >= M_PI / 8)
        throw precondition_error("estimate_der_q: theta_tol must be in (0, pi/8)");
    std::vector<BigRat> fracs;
    for (unsigned q = 1; q <= q_max; ++q)
        for (unsigned p = 0; p < q; ++p)
            if (std::gcd(p, q) == 1) fracs.push_back(make_rat(BigInt(p), BigInt(q)));
    std::sort(fracs.begin(), fracs.end());

    std::vector<TorusPoint> anchors;
    for (const BigRat& x : fracs)
        for (const BigRat& y : fracs) anchors.emplace_back(Rat(x), Rat(y));

    std::vector<std::optional<DirectionEstimate>> slots(anchors.size());
    std::exception_ptr error;
#pragma omp parallel for num_threads(threads) if (threads > 1) schedule(dynamic)
    for (size_t i = 0; i < anchors.size(); ++i) {
        try {
            DirectionEstimate est =
                estimate_der(anchors[i], samples, epsilon, theta_tol, rational_coeff_max);
            if (!est.clusters.empty()) slots[i] = std::move(est);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    std::vector<DirectionEstimate> out;
    for (auto& s : slots)
        if (s) out.push_back(std::move(*s));
    return out;
}

}  // namespace torus
