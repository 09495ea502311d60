#pragma once

#include "cdmd/types.hpp"

#include <string>

// POD reduction and the baseline DMD estimators (exact, forward-backward,
// total least squares), plus spectrum/mode extraction and trajectory
// reconstruction shared by every method.

namespace cdmd {

/// Paired observation matrices: column j of Y is the dt-advanced image of
/// column j of X under the dynamics.
struct SnapshotData {
    Mat X;      // m x n
    Mat Y;      // m x n
    double dt;  // sampling interval, > 0
};

/// Rank-r POD projection of a snapshot pair.
struct ReducedData {
    Mat X;          // r x n, basis^T * X_full
    Mat Y;          // r x n, basis^T * Y_full
    Mat basis;      // m x r, first r left singular vectors of X_full
    Vec sv;         // r retained singular values
    Mat rightvecs;  // n x r right singular vectors
    Index rank;     // r
    Mat mode_lift;  // m x r, Y_full * rightvecs * diag(sv)^-1, cached for modes
    double dt;      // carried through for the discrete -> continuous map
};

/// Evolution matrix with its spectrum and spatial modes.
struct DmdResult {
    Mat A;                 // r x r reduced evolution matrix
    CVec eigs_discrete;    // eigenvalues of A
    CVec eigs_continuous;  // log(eigs_discrete)/dt, principal branch
    CMat modes;            // m x r, column j = eigs_discrete(j)^-1 * mode_lift * v_j
    std::string method;
};

enum class RankPolicy {
    Strict,  // requested rank beyond numerical rank throws RankDeficiencyError
    Clamp,   // truncate to numerical rank; result's rank field reports it
};

/// Rank-r POD reduction of the X-side snapshots.
ReducedData pod_reduce(const SnapshotData& data, Index r,
                       RankPolicy policy = RankPolicy::Strict);

/// Least-squares estimator A = Y * V_r * S_r^-1 with spectrum and modes.
DmdResult exact_dmd(const ReducedData& rd);

/// Forward-backward estimator: principal square root of A_f * A_b^-1, where
/// A_b comes from role-swapped snapshots reduced in their own basis. Modes use
/// the X-side basis.
DmdResult fb_dmd(const SnapshotData& data, Index r,
                 RankPolicy policy = RankPolicy::Strict);

/// Total-least-squares estimator from the stacked [X; Y] subspace.
/// Requires r < n/2.
DmdResult tls_dmd(const ReducedData& rd);

/// Iterates z <- basis * A * basis^T * z in the rank-r subspace, starting from
/// the projection of x0. Returns m x steps, column k = k-th iterate.
Mat reconstruct_trajectory(const DmdResult& res, const ReducedData& rd,
                           const Vec& x0, Index steps);

/// Spectrum + modes for an externally produced evolution matrix (shared tail
/// of every estimator).
DmdResult spectrum_from_operator(const Mat& a, const ReducedData& rd,
                                 std::string method);

/// Swaps the forward/backward roles of the snapshot pair.
SnapshotData swap_roles(const SnapshotData& data);

}  // namespace cdmd
