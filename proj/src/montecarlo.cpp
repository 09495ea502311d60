#include "cdmd/montecarlo.hpp"

#include "cdmd/errors.hpp"
#include "cdmd/parallel.hpp"
#include "cdmd/snapshot_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cdmd {

SnapshotData SystemConfig::generate() const {
    switch (kind) {
        case Kind::LinearPeriodic: return gen_linear_periodic(linper);
        case Kind::Sine: return gen_sine_superposition(sine);
        case Kind::File: return io::load_snapshots(path);
    }
    throw std::logic_error("SystemConfig: bad kind");
}

SystemConfig SystemConfig::with_n(Index n) const {
    SystemConfig out = *this;
    switch (kind) {
        case Kind::LinearPeriodic:
            out.linper.n = n;
            break;
        case Kind::Sine: {
            SineSuperpositionSpec s = sine;
            s.tgrid = Vec::LinSpaced(n + 1, sine.tgrid(0), sine.tgrid(sine.tgrid.size() - 1));
            out.sine = s;
            break;
        }
        case Kind::File:
            throw NumericalError("SystemConfig: cannot vary n for file-backed data");
    }
    return out;
}

Index SystemConfig::default_rank() const {
    switch (kind) {
        case Kind::LinearPeriodic: return 2;
        case Kind::Sine: return 4;
        case Kind::File: return 2;
    }
    throw std::logic_error("SystemConfig: bad kind");
}

Complex SystemConfig::default_truth() const {
    switch (kind) {
        case Kind::LinearPeriodic: return Complex(0.0, -1.0);
        case Kind::Sine: return Complex(1.0, 1.0);  // dominant mode
        case Kind::File: return Complex(0.0, 0.0);
    }
    throw std::logic_error("SystemConfig: bad kind");
}

Complex match_eigenvalue(const std::vector<Complex>& eigs, Complex truth) {
    if (eigs.empty()) throw NumericalError("match_eigenvalue: empty spectrum");
    Complex best = eigs.front();
    double best_d = std::abs(best - truth);
    for (std::size_t i = 1; i < eigs.size(); ++i) {
        const double d = std::abs(eigs[i] - truth);
        if (d < best_d) {
            best_d = d;
            best = eigs[i];
        }
    }
    return best;
}

Complex match_eigenvalue(const CVec& eigs, Complex truth) {
    std::vector<Complex> v(eigs.data(), eigs.data() + eigs.size());
    return match_eigenvalue(v, truth);
}

EllipseSummary confidence_ellipse(const TrialBatch& batch) {
    const std::size_t total = batch.estimates.size();
    if (total < 20)
        throw NumericalError("confidence_ellipse: need at least 20 estimates, got " +
                             std::to_string(total));

    // Nearest 95% of the cloud, ties resolved by trial order.
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(batch.estimates[a] - batch.truth) <
               std::abs(batch.estimates[b] - batch.truth);
    });
    const std::size_t k =
        static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(total)));

    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < k; ++i) {
        const Complex& e = batch.estimates[order[i]];
        mean += Eigen::Vector2d(e.real(), e.imag());
    }
    mean /= static_cast<double>(k);

    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (std::size_t i = 0; i < k; ++i) {
        const Complex& e = batch.estimates[order[i]];
        const Eigen::Vector2d d(e.real() - mean.x(), e.imag() - mean.y());
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(k - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    const Eigen::Vector2d evals = es.eigenvalues();  // ascending
    const double scale_sq = mean.squaredNorm() + std::norm(batch.truth) + 1.0;
    if (!(evals(0) > 1e-24 * scale_sq))
        throw DegenerateBatchError("confidence_ellipse: trimmed estimates have no 2-d spread");

    // Inflate the unit covariance ellipse until every selected point is inside.
    double max_radius = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const Complex& e = batch.estimates[order[i]];
        const Eigen::Vector2d d(e.real() - mean.x(), e.imag() - mean.y());
        const Eigen::Vector2d c = es.eigenvectors().transpose() * d;
        const double radius_sq = c.x() * c.x() / evals(0) + c.y() * c.y() / evals(1);
        max_radius = std::max(max_radius, std::sqrt(radius_sq));
    }
    if (max_radius == 0.0)
        throw DegenerateBatchError("confidence_ellipse: all selected estimates identical");

    EllipseSummary out;
    out.center = Complex(mean.x(), mean.y());
    out.r_min = std::sqrt(evals(0)) * max_radius;
    out.r_major = std::sqrt(evals(1)) * max_radius;
    const Eigen::Vector2d major = es.eigenvectors().col(1);
    double angle = std::atan2(major.y(), major.x());
    constexpr double pi = 3.14159265358979323846264338327950288;
    if (angle >= pi / 2) angle -= pi;
    if (angle < -pi / 2) angle += pi;
    out.orientation = angle;
    out.coverage = 0.95;
    return out;
}

double error_metric(const TrialBatch& batch, double a, bool degenerate_as_zero) {
    if (batch.estimates.empty()) throw NumericalError("error_metric: empty batch");
    Complex mean(0.0, 0.0);
    for (const Complex& e : batch.estimates) mean += e;
    mean /= static_cast<double>(batch.estimates.size());

    double r_min = 0.0;
    try {
        r_min = confidence_ellipse(batch).r_min;
    } catch (const DegenerateBatchError&) {
        if (!degenerate_as_zero) throw;
    }
    return a * std::abs(mean - batch.truth) + (1.0 - a) * r_min;
}

double path_error(const Mat& computed, const Mat& reference) {
    if (computed.rows() != reference.rows() || computed.cols() != reference.cols())
        throw NumericalError("path_error: trajectory shapes differ");
    const double ref_norm = reference.norm();
    if (ref_norm == 0.0) throw NumericalError("path_error: zero reference path");
    return (computed - reference).norm() / ref_norm;
}

double trajectory_error(const DmdResult& res, const ReducedData& rd, const Mat& reference) {
    const Mat computed =
        reconstruct_trajectory(res, rd, reference.col(0), reference.cols());
    return path_error(computed, reference);
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw NumericalError("median_of: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

struct TrialSlot {
    bool ok = false;
    Complex estimate;
    std::string error;
};

template <class Loop>
TrialBatch monte_carlo_impl(const SystemConfig& sys, Method method, const NoiseSpec& noise,
                            int n_trials, std::uint64_t seedbase, Complex truth, Index r,
                            const SolverOptions& opts, Loop&& loop) {
    if (n_trials < 1) throw NumericalError("monte_carlo: need a positive trial count");

    const SnapshotData clean = sys.generate();

    std::vector<TrialSlot> slots(static_cast<std::size_t>(n_trials));
    loop(static_cast<std::ptrdiff_t>(n_trials), [&](std::ptrdiff_t t) {
        TrialSlot& slot = slots[static_cast<std::size_t>(t)];
        try {
            NoiseSpec trial_noise = noise;
            trial_noise.seed = seedbase + static_cast<std::uint64_t>(t);
            const SnapshotData data = add_noise(clean, trial_noise);
            const MethodOutput out = run_method(data, r, method, opts);
            std::vector<Complex> eigs(out.dmd.eigs_continuous.data(),
                                      out.dmd.eigs_continuous.data() +
                                          out.dmd.eigs_continuous.size());
            slot.estimate = match_eigenvalue(eigs, truth);
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    });

    TrialBatch batch;
    batch.method = method_name(method);
    batch.truth = truth;
    batch.n_trials = n_trials;
    batch.seedbase = seedbase;
    for (std::size_t t = 0; t < slots.size(); ++t) {
        if (slots[t].ok) {
            batch.estimates.push_back(slots[t].estimate);
            batch.trial_ids.push_back(static_cast<int>(t));
        } else {
            ++batch.failed;
            batch.failure_messages.push_back(slots[t].error);
        }
    }
    return batch;
}

}  // namespace

TrialBatch monte_carlo(const SystemConfig& sys, Method method, const NoiseSpec& noise,
                       int n_trials, std::uint64_t seedbase, Complex truth, Index r,
                       const SolverOptions& opts) {
    return monte_carlo_impl(sys, method, noise, n_trials, seedbase, truth, r, opts,
                            [](std::ptrdiff_t n, auto&& body) { par::parallel_for(n, body); });
}

namespace ref {
TrialBatch monte_carlo(const SystemConfig& sys, Method method, const NoiseSpec& noise,
                       int n_trials, std::uint64_t seedbase, Complex truth, Index r,
                       const SolverOptions& opts) {
    return monte_carlo_impl(sys, method, noise, n_trials, seedbase, truth, r, opts,
                            [](std::ptrdiff_t n, auto&& body) { par::serial_for(n, body); });
}
}  // namespace ref

std::vector<SweepRow> consistency_sweep(const SystemConfig& sys,
                                        const std::vector<Method>& methods,
                                        const std::vector<Index>& n_values,
                                        const NoiseSpec& noise, int trials,
                                        const SolverOptions& opts) {
    if (trials < 1) throw NumericalError("consistency_sweep: need a positive trial count");
    std::vector<SweepRow> table;
    for (const Index n : n_values) {
        const SystemConfig sized = sys.with_n(n);
        const SnapshotData clean = sized.generate();
        const Index r = sized.default_rank();
        for (const Method method : methods) {
            std::vector<double> values(static_cast<std::size_t>(trials));
            par::parallel_for(trials, [&](std::ptrdiff_t t) {
                NoiseSpec trial_noise = noise;
                trial_noise.seed = noise.seed + static_cast<std::uint64_t>(t);
                const SnapshotData data = add_noise(clean, trial_noise);
                const MethodOutput out = run_method(data, r, method, opts, true);
                const Mat prod = out.dmd.A * out.backward;
                values[static_cast<std::size_t>(t)] =
                    (prod - Mat::Identity(prod.rows(), prod.cols())).norm();
            });
            SweepRow row;
            row.method = method_name(method);
            row.n = n;
            row.sigma2 = resolve_variance(clean, noise);
            row.value = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(trials);
            table.push_back(row);
        }
    }
    return table;
}

TrajectoryStudy trajectory_study(const SystemConfig& sys, Method method,
                                 const NoiseSpec& noise, int trials,
                                 std::uint64_t seedbase, Index r,
                                 const SolverOptions& opts) {
    if (trials < 1) throw NumericalError("trajectory_study: need a positive trial count");
    if (sys.kind != SystemConfig::Kind::LinearPeriodic)
        throw NumericalError("trajectory_study: reference path only defined for linper");

    const SnapshotData clean = sys.generate();
    const Mat reference = linear_periodic_sequence(sys.linper);
    const double variance = resolve_variance(clean, noise);
    const Index n = sys.linper.n;

    // Trajectory reconstruction presumes one observed noisy path, so each
    // trial perturbs the state sequence once and the lagged pair shares
    // noise on the interior samples (unlike the independent per-matrix model
    // of add_noise used by the eigenvalue studies).
    std::vector<TrialSlot> slots(static_cast<std::size_t>(trials));
    std::vector<double> errors(static_cast<std::size_t>(trials), 0.0);
    par::parallel_for(trials, [&](std::ptrdiff_t t) {
        TrialSlot& slot = slots[static_cast<std::size_t>(t)];
        try {
            const Mat noisy_seq = add_noise_sequence(
                reference, variance, seedbase + static_cast<std::uint64_t>(t));
            SnapshotData data;
            data.X = noisy_seq.leftCols(n);
            data.Y = noisy_seq.rightCols(n);
            data.dt = clean.dt;
            const ReducedData rd = pod_reduce(data, r, opts.rank_policy);
            const MethodOutput out = run_method(data, r, method, opts);
            errors[static_cast<std::size_t>(t)] = trajectory_error(out.dmd, rd, reference);
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    });

    TrajectoryStudy study;
    study.method = method_name(method);
    for (std::size_t t = 0; t < slots.size(); ++t) {
        if (slots[t].ok)
            study.errors.push_back(errors[t]);
        else
            ++study.failed;
    }
    if (!study.errors.empty()) study.median = median_of(study.errors);
    return study;
}

}  // namespace cdmd
