// Times the serial reference path against the OpenMP path for the three
// data-parallel kernels: sine field generation, noise injection, and the
// Monte Carlo trial loop. Both paths produce bit-identical results; this
// target only reports throughput.

#include "cdmd/montecarlo.hpp"
#include "cdmd/parallel.hpp"
#include "cdmd/systems.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

using namespace cdmd;

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-24s serial %9.2f ms   openmp %9.2f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", par::max_threads());

    {
        SineSuperpositionSpec spec = SineSuperpositionSpec::defaults(512);
        spec.xgrid = Vec::LinSpaced(2048, 0.0, 12.566370614359172);
        const double s = time_ms([&] { (void)ref::gen_sine_superposition(spec); });
        const double p = time_ms([&] { (void)gen_sine_superposition(spec); });
        report("sine field 2048x512", s, p);
    }

    {
        SineSuperpositionSpec spec = SineSuperpositionSpec::defaults(512);
        spec.xgrid = Vec::LinSpaced(2048, 0.0, 12.566370614359172);
        const SnapshotData clean = gen_sine_superposition(spec);
        NoiseSpec noise;
        noise.variance = 0.25;
        noise.seed = 7;
        const double s = time_ms([&] { (void)ref::add_noise(clean, noise); });
        const double p = time_ms([&] { (void)add_noise(clean, noise); });
        report("noise 2 x 2048x512", s, p);
    }

    {
        SystemConfig sys;
        sys.kind = SystemConfig::Kind::LinearPeriodic;
        sys.linper.n = 32;
        NoiseSpec noise;
        noise.variance = 0.1;
        const Complex truth(0.0, -1.0);
        const double s = time_ms(
            [&] { (void)ref::monte_carlo(sys, Method::Cdmd, noise, 100, 1, truth, 2); }, 2);
        const double p = time_ms(
            [&] { (void)monte_carlo(sys, Method::Cdmd, noise, 100, 1, truth, 2); }, 2);
        report("cdmd x 100 trials", s, p);
    }

    return 0;
}
