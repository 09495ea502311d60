#include "cdmd/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace cdmd::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(const Mat& m, const char* who) {
    if (m.size() == 0) throw NumericalError(std::string(who) + ": empty matrix");
    if (!m.allFinite()) throw NumericalError(std::string(who) + ": non-finite entries");
}

void require_square(const Mat& m, const char* who) {
    if (m.rows() != m.cols()) throw NumericalError(std::string(who) + ": matrix not square");
}

}  // namespace

SvdFactors svd(const Mat& m) {
    require_finite(m, "svd");
    Eigen::BDCSVD<Mat> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success)
        throw FactorizationError("svd: decomposition did not converge");
    return SvdFactors{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

Mat pinv(const Mat& m, double rank_tol) {
    require_finite(m, "pinv");
    const SvdFactors f = svd(m);
    if (rank_tol < 0.0)
        rank_tol = static_cast<double>(std::max(m.rows(), m.cols())) * kEps;
    const double cutoff = rank_tol * f.S(0);
    Vec inv_s = Vec::Zero(f.S.size());
    for (Index i = 0; i < f.S.size(); ++i)
        if (f.S(i) > cutoff) inv_s(i) = 1.0 / f.S(i);
    return f.V * inv_s.asDiagonal() * f.U.transpose();
}

EigenPairs eig(const Mat& a) {
    require_finite(a, "eig");
    require_square(a, "eig");
    Eigen::EigenSolver<Mat> solver(a);
    if (solver.info() != Eigen::Success)
        throw FactorizationError("eig: QR iteration did not converge");

    const CVec vals = solver.eigenvalues();
    const CMat vecs = solver.eigenvectors();

    std::vector<Index> order(static_cast<std::size_t>(vals.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
        const double mi = std::abs(vals(i)), mj = std::abs(vals(j));
        if (mi != mj) return mi > mj;
        if (vals(i).real() != vals(j).real()) return vals(i).real() > vals(j).real();
        return vals(i).imag() > vals(j).imag();
    });

    EigenPairs out;
    out.values.resize(vals.size());
    out.vectors.resize(vecs.rows(), vecs.cols());
    for (Index k = 0; k < vals.size(); ++k) {
        out.values(k) = vals(order[static_cast<std::size_t>(k)]);
        CVec v = vecs.col(order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = v / v.norm();
    }
    return out;
}

Mat sylvester_solve(const Mat& c1, const Mat& c2, const Mat& c3) {
    require_finite(c1, "sylvester_solve");
    require_finite(c2, "sylvester_solve");
    require_finite(c3, "sylvester_solve");
    require_square(c1, "sylvester_solve");
    require_square(c2, "sylvester_solve");
    if (c3.rows() != c1.rows() || c3.cols() != c2.rows())
        throw NumericalError("sylvester_solve: right-hand side shape mismatch");

    Eigen::ComplexSchur<Mat> s1(c1.rows());
    s1.compute(c1);
    if (s1.info() != Eigen::Success)
        throw FactorizationError("sylvester_solve: Schur of C1 did not converge");
    Eigen::ComplexSchur<Mat> s2(c2.rows());
    s2.compute(c2);
    if (s2.info() != Eigen::Success)
        throw FactorizationError("sylvester_solve: Schur of C2 did not converge");

    const CMat& t1 = s1.matrixT();
    const CMat& t2 = s2.matrixT();
    const CMat& z1 = s1.matrixU();
    const CMat& z2 = s2.matrixU();

    // T1*F + F*T2 = G with F = Z1^* A Z2 and G = Z1^* C3 Z2; both T upper
    // triangular, so F comes out one column at a time through shifted
    // triangular solves.
    CMat g = z1.adjoint() * c3 * z2;
    const Index p = t1.rows();
    const Index q = t2.rows();
    const double scale = c1.norm() + c2.norm();
    const double sing_tol = std::max(scale, 1.0) * kEps * static_cast<double>(std::max(p, q));

    CMat f(p, q);
    for (Index k = 0; k < q; ++k) {
        CVec rhs = g.col(k);
        if (k > 0) rhs.noalias() -= f.leftCols(k) * t2.col(k).head(k);
        // (T1 + t2(k,k) I) x = rhs, back substitution from the last row.
        const Complex shift = t2(k, k);
        CVec x(p);
        for (Index i = p - 1; i >= 0; --i) {
            Complex acc = rhs(i);
            for (Index j = i + 1; j < p; ++j) acc -= t1(i, j) * x(j);
            const Complex diag = t1(i, i) + shift;
            if (std::abs(diag) <= sing_tol)
                throw SingularPencilError(
                    "sylvester_solve: shared eigenvalue between C1 and -C2 (pencil singular)");
            x(i) = acc / diag;
        }
        f.col(k) = x;
    }

    const CMat a = z1 * f * z2.adjoint();
    // Real data in, real solution out; the imaginary residue is rounding noise.
    return a.real();
}

CMat sqrtm(const Mat& a) {
    require_finite(a, "sqrtm");
    require_square(a, "sqrtm");

    Eigen::ComplexSchur<Mat> schur(a.rows());
    schur.compute(a);
    if (schur.info() != Eigen::Success)
        throw FactorizationError("sqrtm: Schur decomposition did not converge");

    const CMat& t = schur.matrixT();
    const CMat& z = schur.matrixU();
    const Index n = t.rows();
    const double tol = std::max(a.norm(), 1.0) * kEps * static_cast<double>(n);

    for (Index i = 0; i < n; ++i) {
        const Complex lam = t(i, i);
        if (lam.real() <= tol && std::abs(lam.imag()) <= tol)
            throw BranchCutError(
                "sqrtm: eigenvalue on the closed negative real axis, principal root undefined");
    }

    // Principal square root of the upper-triangular factor.
    CMat s = CMat::Zero(n, n);
    for (Index i = 0; i < n; ++i) s(i, i) = std::sqrt(t(i, i));
    for (Index d = 1; d < n; ++d) {
        for (Index i = 0; i + d < n; ++i) {
            const Index j = i + d;
            Complex acc = t(i, j);
            for (Index k = i + 1; k < j; ++k) acc -= s(i, k) * s(k, j);
            s(i, j) = acc / (s(i, i) + s(j, j));
        }
    }
    return z * s * z.adjoint();
}

double condition_estimate(const Mat& a) {
    Eigen::JacobiSVD<Mat> dec(a);
    const Vec& sv = dec.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

Mat linsolve_right(const Mat& a, const Mat& b) {
    require_finite(a, "linsolve_right");
    require_finite(b, "linsolve_right");
    require_square(a, "linsolve_right");
    if (b.cols() != a.rows())
        throw NumericalError("linsolve_right: B has incompatible column count");

    Eigen::JacobiSVD<Mat> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = dec.singularValues();
    const double smin = sv(sv.size() - 1);
    const double cond = smin == 0.0 ? std::numeric_limits<double>::infinity() : sv(0) / smin;
    const double cap = 1.0 / std::sqrt(kEps);
    if (!(cond < cap)) {
        throw IllConditionedError(
            "linsolve_right: coefficient matrix near singular (condition estimate " +
                std::to_string(cond) + ")",
            cond);
    }
    // X A = B  <=>  A^T X^T = B^T; the SVD solve reuses the factors above.
    // A = U S V^T, so X = B V S^{-1} U^T.
    return b * dec.matrixV() * sv.cwiseInverse().asDiagonal() * dec.matrixU().transpose();
}

}  // namespace cdmd::linalg
