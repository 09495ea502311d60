#pragma once

#include "cdmd/errors.hpp"
#include "cdmd/types.hpp"

// Dense factorizations and solvers shared by all DMD variants. Everything here
// is a pure function of its inputs and deterministic: identical inputs give
// bit-identical outputs within a process.

namespace cdmd::linalg {

/// Thin SVD, k = min(m, n). Throws FactorizationError if the decomposition
/// does not converge and NumericalError on empty or non-finite input.
SvdFactors svd(const Mat& m);

/// Moore-Penrose pseudoinverse via SVD. Singular values below
/// rank_tol * S_max are truncated; rank_tol < 0 selects the default
/// max(m, n) * machine epsilon.
Mat pinv(const Mat& m, double rank_tol = -1.0);

/// Eigenpairs of a real square matrix. Sorted by descending modulus, ties by
/// descending real part, then descending imaginary part; eigenvectors have
/// unit norm.
EigenPairs eig(const Mat& a);

/// Solves C1*A + A*C2 = C3 by complex Schur reduction of both coefficient
/// matrices and triangular back-substitution. Throws SingularPencilError when
/// an eigenvalue of C1 coincides with an eigenvalue of -C2 within tolerance.
Mat sylvester_solve(const Mat& c1, const Mat& c2, const Mat& c3);

/// Principal matrix square root via complex Schur. Throws BranchCutError when
/// an eigenvalue lies on the closed negative real axis within tolerance.
CMat sqrtm(const Mat& a);

/// Solves X * A = B for X. Rejects A when its condition estimate exceeds
/// 1/sqrt(machine epsilon), throwing IllConditionedError with the estimate.
Mat linsolve_right(const Mat& a, const Mat& b);

/// Largest/smallest singular value ratio of a square matrix.
double condition_estimate(const Mat& a);

}  // namespace cdmd::linalg
