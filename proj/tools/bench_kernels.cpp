// bench_kernels - timings of the OpenMP kernels against their serial runs.
#include <chrono>
#include <cstdio>
#include <functional>

#include "torus/arith.hpp"
#include "torus/density.hpp"
#include "torus/directions.hpp"
#include "torus/invariant.hpp"
#include "torus/orbit.hpp"

using namespace torus;

namespace {

double time_of(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %9.3f ms %9.3f ms   x%.2f\n", name, serial * 1e3, parallel * 1e3,
                parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : 2;
    std::printf("kernel                          serial      %d threads   speedup\n", threads);

    GeneratorSet gens = GeneratorSet::default235();

    {
        RhombusSet e(Rat(BigInt(1), BigInt(100000)), 7);
        const uint64_t n = 1000000;
        double s = time_of([&] { check_preimage_property(e, n, 42, 1); });
        double p = time_of([&] { check_preimage_property(e, n, 42, threads); });
        row("ppcheck 1e6 samples", s, p);
    }
    {
        BigInt s_max("1000000000000");
        int bits = choose_bits(s_max, BigRat(1, BigInt("1000000000000")));
        TorusPoint start(FixedReal::sqrt_frac(2, bits), FixedReal::sqrt_frac(3, bits));
        double s = time_of([&] { enumerate_orbit(start, gens, s_max, 1); });
        double p = time_of([&] { enumerate_orbit(start, gens, s_max, threads); });
        row("orbit eval to 1e12", s, p);

        auto samples = enumerate_orbit(start, gens, s_max, threads);
        double gs = time_of([&] { grid_coverage(samples, 64, 1); });
        double gp = time_of([&] { grid_coverage(samples, 64, threads); });
        row("grid coverage G=64", gs, gp);

        double cs = time_of([&] { covering_radius_estimate(samples, 256, 1); });
        double cp = time_of([&] { covering_radius_estimate(samples, 256, threads); });
        row("covering radius G=256", cs, cp);

        TorusPoint tgt(Rat(BigInt(1), BigInt(2)), Rat(BigInt(1), BigInt(2)));
        double as = time_of([&] { best_approx(start, tgt, gens, s_max, 1); });
        double ap = time_of([&] { best_approx(start, tgt, gens, s_max, threads); });
        row("best approx to 1e12", as, ap);

        double ds = time_of([&] { estimate_der_q(samples, 4, 0.05, 0.02, 1); });
        double dp = time_of([&] { estimate_der_q(samples, 4, 0.05, 0.02, threads); });
        row("dirset anchors qmax=4", ds, dp);
    }
    return 0;
}
