#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

// Dense matrix foundation shared by every estimator.
//
// Storage is Eigen's default column-major layout throughout; all file formats
// and kernels assume it. Real data uses plain transpose (inputs are real, the
// conjugate transpose only matters once spectra appear).

namespace cdmd {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Thin SVD factors M = U * diag(S) * V^T with S sorted descending.
struct SvdFactors {
    Mat U;   // m x k left singular vectors, orthonormal columns
    Vec S;   // k singular values, non-negative, descending
    Mat V;   // n x k right singular vectors, orthonormal columns
};

/// Eigenpairs of a real square matrix, sorted by descending modulus,
/// ties by descending real part, then descending imaginary part.
struct EigenPairs {
    CVec values;   // length r
    CMat vectors;  // r x r, column j pairs with values(j), unit norm
};

inline bool all_finite(const Mat& m) { return m.allFinite(); }
inline bool all_finite(const CMat& m) { return m.allFinite(); }

}  // namespace cdmd
