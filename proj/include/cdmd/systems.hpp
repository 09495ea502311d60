#pragma once

#include "cdmd/dmd.hpp"
#include "cdmd/types.hpp"

#include <cstdint>

// Benchmark system generators and calibrated noise injection. Generators are
// pure functions of their spec (and seed, for noise); the parallel paths under
// the default API are bit-identical to the serial references in cdmd::ref.

namespace cdmd {

/// Planar linear system dz/dt = M z with M = [[1,-2],[1,-1]]; M^2 = -I, so
/// the flow is exp(M t) = cos(t) I + sin(t) M and the continuous spectrum is
/// exactly +-i. Sampled in closed form, no integrator error.
struct LinearPeriodicSpec {
    Index n = 32;                       // snapshot pair count
    double t_end = 6.283185307179586476925286766559;  // one period
    Eigen::Vector2d z0{1.0, 0.1};

    double dt() const { return t_end / static_cast<double>(n); }
};

Eigen::Matrix2d linear_periodic_matrix();

/// Closed-form state at time t.
Eigen::Vector2d linear_periodic_state(const LinearPeriodicSpec& spec, double t);

/// Snapshot pair: column j of X is z(j dt), column j of Y is z((j+1) dt).
SnapshotData gen_linear_periodic(const LinearPeriodicSpec& spec);

/// The n+1 sequential states z(0), z(dt), ..., z(t_end) as columns.
Mat linear_periodic_sequence(const LinearPeriodicSpec& spec);

/// Superposition of a growing and a decaying traveling sine,
/// z(x,t) = sin(k1 x - w1 t) e^(g1 t) + sin(k2 x - w2 t) e^(g2 t).
/// Data has rank 4 and continuous spectrum {g1 +- i w1, g2 +- i w2}.
struct SineSuperpositionSpec {
    double k1 = 1.0, w1 = 1.0, g1 = 1.0;
    double k2 = 0.4, w2 = 3.7, g2 = -0.2;
    Vec xgrid;  // spatial samples
    Vec tgrid;  // n+1 uniformly spaced time samples

    /// Default grids: 128 points on [0, 4pi], n+1 times on [0, 4].
    static SineSuperpositionSpec defaults(Index n = 16);
};

double sine_superposition_value(const SineSuperpositionSpec& spec, double x, double t);

/// Snapshot pair over the spec's grids (n = tgrid.size()-1 columns).
SnapshotData gen_sine_superposition(const SineSuperpositionSpec& spec);

/// Full m x (n+1) field sampled on the grids.
Mat sine_sequence(const SineSuperpositionSpec& spec);

enum class NoiseMode { Variance, SnrDb };

/// White Gaussian sensor noise, independent per entry and per matrix.
struct NoiseSpec {
    double variance = 0.1;   // used in Variance mode; 0 is a no-op
    double snr_db = 0.0;     // used in SnrDb mode
    std::uint64_t seed = 0;
    NoiseMode mode = NoiseMode::Variance;
};

/// Variance the spec resolves to against this clean data (SnrDb mode derives
/// it from the mean squared clean entry).
double resolve_variance(const SnapshotData& clean, const NoiseSpec& spec);

/// SNR in dB of this variance against the clean data.
double snr_db_of(const SnapshotData& clean, double variance);

/// Adds N(0, variance) to every entry of both matrices. Column c of X draws
/// from stream (seed, 0, c) and of Y from (seed, 1, c), so output is
/// reproducible and independent of thread count.
SnapshotData add_noise(const SnapshotData& data, const NoiseSpec& spec);

/// Same per-column streams applied to a bare sequence matrix (stream id 0).
Mat add_noise_sequence(const Mat& sequence, double variance, std::uint64_t seed);

namespace ref {
/// Serial reference implementations, bit-identical to the parallel defaults.
SnapshotData gen_sine_superposition(const SineSuperpositionSpec& spec);
SnapshotData add_noise(const SnapshotData& data, const NoiseSpec& spec);
}  // namespace ref

}  // namespace cdmd
