#pragma once

#include "cdmd/methods.hpp"
#include "cdmd/systems.hpp"
#include "cdmd/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Monte Carlo evaluation: repeated noisy estimation of a tracked eigenvalue,
// confidence ellipses over the estimates, the scalar error metric, the
// consistency sweep, and trajectory reconstruction error. Trials are
// independent with pre-assigned seeds; aggregation is by trial index, so
// results do not depend on thread count.

namespace cdmd {

/// Benchmark system selector shared by the harness and CLI.
struct SystemConfig {
    enum class Kind { LinearPeriodic, Sine, File };
    Kind kind = Kind::LinearPeriodic;
    LinearPeriodicSpec linper;
    SineSuperpositionSpec sine = SineSuperpositionSpec::defaults();
    std::string path;  // Kind::File

    SnapshotData generate() const;   // clean snapshot pair
    SystemConfig with_n(Index n) const;
    Index default_rank() const;      // 2 for linper, 4 for sine
    Complex default_truth() const;   // tracked continuous eigenvalue
};

/// Eigenvalue estimates for one (method, system, noise) study.
struct TrialBatch {
    std::string method;
    std::vector<Complex> estimates;  // successful trials, trial order
    std::vector<int> trial_ids;      // originating trial index per estimate
    Complex truth;
    int n_trials = 0;                // requested; estimates.size() + failed
    std::uint64_t seedbase = 0;
    int failed = 0;
    std::vector<std::string> failure_messages;  // one per failed trial
};

/// Covariance ellipse over the 95% of estimates nearest the truth, inflated
/// so every selected point lies inside. Center is the trimmed mean.
struct EllipseSummary {
    Complex center;
    double r_major = 0.0;
    double r_min = 0.0;
    double orientation = 0.0;  // radians, major axis vs. real axis, in [-pi/2, pi/2)
    double coverage = 0.95;
};

/// Eigenvalue nearest to `truth`; ties keep the earliest entry.
Complex match_eigenvalue(const std::vector<Complex>& eigs, Complex truth);
Complex match_eigenvalue(const CVec& eigs, Complex truth);

/// Throws DegenerateBatchError when the trimmed cloud has no 2-d spread.
/// Requires at least 20 estimates.
EllipseSummary confidence_ellipse(const TrialBatch& batch);

/// a * |mean(all estimates) - truth| + (1-a) * r_min. With
/// degenerate_as_zero, a degenerate ellipse contributes r_min = 0 instead of
/// throwing.
double error_metric(const TrialBatch& batch, double a, bool degenerate_as_zero = false);

/// |computed - reference|_2 over all stacked samples, divided by
/// |reference|_2. Throws on shape mismatch.
double path_error(const Mat& computed, const Mat& reference);

/// Reconstructs from the reference's first column and measures path_error
/// against the whole reference.
double trajectory_error(const DmdResult& res, const ReducedData& rd, const Mat& reference);

/// One row of a consistency table: mean |A*B - I|_F over trials.
struct SweepRow {
    std::string method;
    Index n = 0;
    double sigma2 = 0.0;
    double value = 0.0;
};

std::vector<SweepRow> consistency_sweep(const SystemConfig& sys,
                                        const std::vector<Method>& methods,
                                        const std::vector<Index>& n_values,
                                        const NoiseSpec& noise, int trials,
                                        const SolverOptions& opts = {});

/// Trial t perturbs the clean data with seed seedbase + t, runs the method,
/// and tracks the eigenvalue nearest `truth` in the continuous plane.
TrialBatch monte_carlo(const SystemConfig& sys, Method method, const NoiseSpec& noise,
                       int n_trials, std::uint64_t seedbase, Complex truth, Index r,
                       const SolverOptions& opts = {});

/// Per-trial relative trajectory errors against the clean reference path.
struct TrajectoryStudy {
    std::string method;
    std::vector<double> errors;  // successful trials, trial order
    double median = 0.0;
    int failed = 0;
};

TrajectoryStudy trajectory_study(const SystemConfig& sys, Method method,
                                 const NoiseSpec& noise, int trials,
                                 std::uint64_t seedbase, Index r,
                                 const SolverOptions& opts = {});

double median_of(std::vector<double> values);

namespace ref {
/// Serial reference for the trial loop; bit-identical to the parallel path.
TrialBatch monte_carlo(const SystemConfig& sys, Method method, const NoiseSpec& noise,
                       int n_trials, std::uint64_t seedbase, Complex truth, Index r,
                       const SolverOptions& opts = {});
}  // namespace ref

}  // namespace cdmd
