#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cdmd/dmd.hpp"
#include "cdmd/errors.hpp"
#include "cdmd/systems.hpp"

using namespace cdmd;

namespace {

Complex matched(const CVec& eigs, Complex truth) {
    Complex best = eigs(0);
    for (Index j = 1; j < eigs.size(); ++j)
        if (std::abs(eigs(j) - truth) < std::abs(best - truth)) best = eigs(j);
    return best;
}

}  // namespace

TEST_CASE("linear periodic generator") {
    LinearPeriodicSpec spec;
    spec.n = 48;
    const SnapshotData d = gen_linear_periodic(spec);

    SUBCASE("starts at the configured initial point") {
        CHECK(d.X(0, 0) == 1.0);
        CHECK(d.X(1, 0) == 0.1);
    }
    SUBCASE("one full period returns to the start") {
        const Eigen::Vector2d z_end = linear_periodic_state(spec, spec.t_end);
        CHECK((z_end - spec.z0).norm() <= 1e-10);
    }
    SUBCASE("consecutive columns follow the exact flow") {
        const double dt = spec.dt();
        const Eigen::Matrix2d flow = std::cos(dt) * Eigen::Matrix2d::Identity() +
                                     std::sin(dt) * linear_periodic_matrix();
        for (Index j = 0; j < spec.n; ++j) {
            CHECK((d.Y.col(j) - flow * d.X.col(j)).norm() <= 1e-12);
            if (j + 1 < spec.n) CHECK((d.X.col(j + 1) - d.Y.col(j)).norm() == 0.0);
        }
    }
    SUBCASE("spectrum of the clean data is +-i") {
        const DmdResult res = exact_dmd(pod_reduce(d, 2));
        CHECK(std::abs(matched(res.eigs_continuous, Complex(0, 1)) - Complex(0, 1)) < 1e-8);
        CHECK(std::abs(matched(res.eigs_continuous, Complex(0, -1)) - Complex(0, -1)) < 1e-8);
    }
}

TEST_CASE("sine superposition generator") {
    SUBCASE("value at the origin is zero") {
        const SineSuperpositionSpec spec = SineSuperpositionSpec::defaults(8);
        CHECK(sine_superposition_value(spec, 0.0, 0.0) == 0.0);
    }
    SUBCASE("default spec yields the four analytic eigenvalues") {
        const SineSuperpositionSpec spec = SineSuperpositionSpec::defaults(16);
        const DmdResult res = exact_dmd(pod_reduce(gen_sine_superposition(spec), 4));
        for (const Complex truth : {Complex(1, 1), Complex(1, -1), Complex(-0.2, 3.7),
                                    Complex(-0.2, -3.7)}) {
            CHECK(std::abs(matched(res.eigs_continuous, truth) - truth) < 1e-5);
        }
    }
    SUBCASE("degenerate second mode leaves rank-2 data with spectrum 1 +- i") {
        SineSuperpositionSpec spec = SineSuperpositionSpec::defaults(16);
        spec.k2 = 0.0;
        spec.w2 = 0.0;  // sin(0) kills the second mode everywhere
        const SnapshotData d = gen_sine_superposition(spec);
        const ReducedData rd = pod_reduce(d, 4, RankPolicy::Clamp);
        CHECK(rd.rank == 2);
        const DmdResult res = exact_dmd(rd);
        CHECK(std::abs(matched(res.eigs_continuous, Complex(1, 1)) - Complex(1, 1)) < 1e-6);
        CHECK(std::abs(matched(res.eigs_continuous, Complex(1, -1)) - Complex(1, -1)) < 1e-6);
    }
    SUBCASE("zero growth rates keep the field inside [-2, 2]") {
        SineSuperpositionSpec spec = SineSuperpositionSpec::defaults(16);
        spec.g1 = 0.0;
        spec.g2 = 0.0;
        const SnapshotData d = gen_sine_superposition(spec);
        CHECK(d.X.cwiseAbs().maxCoeff() <= 2.0);
        CHECK(d.Y.cwiseAbs().maxCoeff() <= 2.0);
    }
    SUBCASE("rejects non-uniform time grids") {
        SineSuperpositionSpec spec = SineSuperpositionSpec::defaults(8);
        spec.tgrid(3) += 0.05;
        CHECK_THROWS_AS(gen_sine_superposition(spec), NumericalError);
    }
}

TEST_CASE("add_noise basics") {
    const SineSuperpositionSpec spec = SineSuperpositionSpec::defaults(12);
    const SnapshotData clean = gen_sine_superposition(spec);

    SUBCASE("zero variance is the identity transform") {
        NoiseSpec noise;
        noise.variance = 0.0;
        const SnapshotData same = add_noise(clean, noise);
        CHECK(same.X == clean.X);
        CHECK(same.Y == clean.Y);
    }
    SUBCASE("fixed seed reproduces bit-identical output") {
        NoiseSpec noise;
        noise.variance = 0.3;
        noise.seed = 1234;
        const SnapshotData a = add_noise(clean, noise);
        const SnapshotData b = add_noise(clean, noise);
        CHECK(a.X == b.X);
        CHECK(a.Y == b.Y);
    }
    SUBCASE("shape and dt preserved") {
        NoiseSpec noise;
        noise.variance = 0.3;
        const SnapshotData noisy = add_noise(clean, noise);
        CHECK(noisy.X.rows() == clean.X.rows());
        CHECK(noisy.X.cols() == clean.X.cols());
        CHECK(noisy.dt == clean.dt);
    }
}

TEST_CASE("noise statistics over a million entries") {
    SnapshotData zeros;
    zeros.X = Mat::Zero(1000, 500);
    zeros.Y = Mat::Zero(1000, 500);
    zeros.dt = 1.0;
    NoiseSpec noise;
    noise.variance = 0.7;
    noise.seed = 9;
    const SnapshotData noisy = add_noise(zeros, noise);

    const double n_entries = 2.0 * 1000.0 * 500.0;
    const double mean = (noisy.X.sum() + noisy.Y.sum()) / n_entries;
    const double var =
        (noisy.X.squaredNorm() + noisy.Y.squaredNorm()) / n_entries - mean * mean;
    CHECK(std::abs(var - 0.7) <= 0.007);  // within 1%

    // independence across the two matrices: empirical cross-correlation
    const double cross = (noisy.X.array() * noisy.Y.array()).sum() / (500000.0 * 0.7);
    CHECK(std::abs(cross) < 0.01);
}

TEST_CASE("snr mode resolves the variance against the clean signal") {
    const SineSuperpositionSpec spec = SineSuperpositionSpec::defaults(12);
    const SnapshotData clean = gen_sine_superposition(spec);
    NoiseSpec noise;
    noise.mode = NoiseMode::SnrDb;
    noise.snr_db = 10.0;
    const double variance = resolve_variance(clean, noise);
    CHECK(variance > 0.0);
    // the dB map inverts
    CHECK(snr_db_of(clean, variance) == doctest::Approx(10.0).epsilon(1e-12));
    const double power = (clean.X.squaredNorm() + clean.Y.squaredNorm()) /
                         static_cast<double>(clean.X.size() + clean.Y.size());
    CHECK(variance == doctest::Approx(power / 10.0).epsilon(1e-12));
}
