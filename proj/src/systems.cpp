#include "cdmd/systems.hpp"

#include "cdmd/errors.hpp"
#include "cdmd/parallel.hpp"
#include "cdmd/rng.hpp"

#include <cmath>

namespace cdmd {

Eigen::Matrix2d linear_periodic_matrix() {
    Eigen::Matrix2d m;
    m << 1.0, -2.0, 1.0, -1.0;
    return m;
}

Eigen::Vector2d linear_periodic_state(const LinearPeriodicSpec& spec, double t) {
    // exp(M t) = cos(t) I + sin(t) M because M^2 = -I.
    const Eigen::Matrix2d flow =
        std::cos(t) * Eigen::Matrix2d::Identity() + std::sin(t) * linear_periodic_matrix();
    return flow * spec.z0;
}

Mat linear_periodic_sequence(const LinearPeriodicSpec& spec) {
    if (spec.n < 2) throw NumericalError("linear_periodic: need n >= 2");
    Mat seq(2, spec.n + 1);
    const double dt = spec.dt();
    for (Index j = 0; j <= spec.n; ++j)
        seq.col(j) = linear_periodic_state(spec, static_cast<double>(j) * dt);
    return seq;
}

SnapshotData gen_linear_periodic(const LinearPeriodicSpec& spec) {
    const Mat seq = linear_periodic_sequence(spec);
    SnapshotData data;
    data.X = seq.leftCols(spec.n);
    data.Y = seq.rightCols(spec.n);
    data.dt = spec.dt();
    return data;
}

SineSuperpositionSpec SineSuperpositionSpec::defaults(Index n) {
    SineSuperpositionSpec spec;
    constexpr double four_pi = 4.0 * 3.14159265358979323846264338327950288;
    spec.xgrid = Vec::LinSpaced(128, 0.0, four_pi);
    spec.tgrid = Vec::LinSpaced(n + 1, 0.0, 4.0);
    return spec;
}

double sine_superposition_value(const SineSuperpositionSpec& s, double x, double t) {
    return std::sin(s.k1 * x - s.w1 * t) * std::exp(s.g1 * t) +
           std::sin(s.k2 * x - s.w2 * t) * std::exp(s.g2 * t);
}

namespace {

void check_sine_spec(const SineSuperpositionSpec& spec) {
    if (spec.xgrid.size() < 2) throw NumericalError("sine_superposition: need >= 2 x samples");
    if (spec.tgrid.size() < 2) throw NumericalError("sine_superposition: need >= 2 t samples");
    const double dt = spec.tgrid(1) - spec.tgrid(0);
    if (!(dt > 0.0)) throw NumericalError("sine_superposition: time grid must increase");
    for (Index j = 1; j + 1 < spec.tgrid.size(); ++j) {
        const double step = spec.tgrid(j + 1) - spec.tgrid(j);
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw NumericalError("sine_superposition: time grid must be uniform");
    }
}

template <class Loop>
Mat sine_sequence_impl(const SineSuperpositionSpec& spec, Loop&& loop) {
    const Index m = spec.xgrid.size();
    const Index cols = spec.tgrid.size();
    Mat seq(m, cols);
    loop(cols, [&](std::ptrdiff_t j) {
        const double t = spec.tgrid(j);
        for (Index i = 0; i < m; ++i)
            seq(i, j) = sine_superposition_value(spec, spec.xgrid(i), t);
    });
    return seq;
}

SnapshotData split_sequence(const Mat& seq, double dt) {
    const Index n = seq.cols() - 1;
    SnapshotData data;
    data.X = seq.leftCols(n);
    data.Y = seq.rightCols(n);
    data.dt = dt;
    return data;
}

// One noise stream per column; the stream id separates the two matrices.
void add_noise_column(Mat& m, Index col, double sigma, std::uint64_t seed,
                      std::uint64_t matrix_id) {
    GaussianStream stream(derive_seed(seed, matrix_id, static_cast<std::uint64_t>(col)));
    for (Index i = 0; i < m.rows(); ++i) m(i, col) += sigma * stream.next();
}

template <class Loop>
SnapshotData add_noise_impl(const SnapshotData& data, const NoiseSpec& spec, Loop&& loop) {
    const double variance = resolve_variance(data, spec);
    if (variance < 0.0) throw NumericalError("add_noise: negative variance");
    SnapshotData noisy = data;
    if (variance == 0.0) return noisy;
    const double sigma = std::sqrt(variance);
    const Index n = data.X.cols();
    loop(n, [&](std::ptrdiff_t c) {
        add_noise_column(noisy.X, c, sigma, spec.seed, 0);
        add_noise_column(noisy.Y, c, sigma, spec.seed, 1);
    });
    return noisy;
}

}  // namespace

Mat sine_sequence(const SineSuperpositionSpec& spec) {
    check_sine_spec(spec);
    return sine_sequence_impl(spec, [](std::ptrdiff_t n, auto&& body) {
        par::parallel_for(n, body);
    });
}

SnapshotData gen_sine_superposition(const SineSuperpositionSpec& spec) {
    check_sine_spec(spec);
    const double dt = spec.tgrid(1) - spec.tgrid(0);
    return split_sequence(sine_sequence(spec), dt);
}

double resolve_variance(const SnapshotData& clean, const NoiseSpec& spec) {
    if (spec.mode == NoiseMode::Variance) return spec.variance;
    const double power =
        (clean.X.squaredNorm() + clean.Y.squaredNorm()) /
        static_cast<double>(clean.X.size() + clean.Y.size());
    return power / std::pow(10.0, spec.snr_db / 10.0);
}

double snr_db_of(const SnapshotData& clean, double variance) {
    const double power =
        (clean.X.squaredNorm() + clean.Y.squaredNorm()) /
        static_cast<double>(clean.X.size() + clean.Y.size());
    return 10.0 * std::log10(power / variance);
}

SnapshotData add_noise(const SnapshotData& data, const NoiseSpec& spec) {
    return add_noise_impl(data, spec, [](std::ptrdiff_t n, auto&& body) {
        par::parallel_for(n, body);
    });
}

Mat add_noise_sequence(const Mat& sequence, double variance, std::uint64_t seed) {
    if (variance < 0.0) throw NumericalError("add_noise_sequence: negative variance");
    Mat noisy = sequence;
    if (variance == 0.0) return noisy;
    const double sigma = std::sqrt(variance);
    par::parallel_for(sequence.cols(), [&](std::ptrdiff_t c) {
        add_noise_column(noisy, c, sigma, seed, 0);
    });
    return noisy;
}

namespace ref {

SnapshotData gen_sine_superposition(const SineSuperpositionSpec& spec) {
    check_sine_spec(spec);
    const double dt = spec.tgrid(1) - spec.tgrid(0);
    const Mat seq = sine_sequence_impl(spec, [](std::ptrdiff_t n, auto&& body) {
        par::serial_for(n, body);
    });
    return split_sequence(seq, dt);
}

SnapshotData add_noise(const SnapshotData& data, const NoiseSpec& spec) {
    return add_noise_impl(data, spec, [](std::ptrdiff_t n, auto&& body) {
        par::serial_for(n, body);
    });
}

}  // namespace ref

}  // namespace cdmd
