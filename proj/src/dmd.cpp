#include "cdmd/dmd.hpp"

#include "cdmd/errors.hpp"
#include "cdmd/linalg.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace cdmd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void validate(const SnapshotData& data) {
    if (data.X.rows() != data.Y.rows() || data.X.cols() != data.Y.cols())
        throw NumericalError("snapshot pair has mismatched shapes");
    if (data.X.size() == 0) throw NumericalError("empty snapshot pair");
    if (!(data.dt > 0.0)) throw NumericalError("snapshot dt must be positive");
    if (!data.X.allFinite() || !data.Y.allFinite())
        throw NumericalError("snapshot pair has non-finite entries");
}

}  // namespace

SnapshotData swap_roles(const SnapshotData& data) {
    return SnapshotData{data.Y, data.X, data.dt};
}

ReducedData pod_reduce(const SnapshotData& data, Index r, RankPolicy policy) {
    validate(data);
    const Index m = data.X.rows();
    const Index n = data.X.cols();
    if (r < 1 || r > std::min(m, n))
        throw NumericalError("pod_reduce: rank out of range 1..min(m,n)");

    const SvdFactors f = linalg::svd(data.X);
    const double cutoff =
        static_cast<double>(std::max(m, n)) * kEps * f.S(0);
    Index numerical_rank = 0;
    while (numerical_rank < f.S.size() && f.S(numerical_rank) > cutoff) ++numerical_rank;

    if (r > numerical_rank) {
        if (policy == RankPolicy::Strict)
            throw RankDeficiencyError(
                "pod_reduce: requested rank " + std::to_string(r) +
                " exceeds numerical rank " + std::to_string(numerical_rank));
        r = numerical_rank;
    }

    ReducedData rd;
    rd.basis = f.U.leftCols(r);
    rd.sv = f.S.head(r);
    rd.rightvecs = f.V.leftCols(r);
    rd.rank = r;
    rd.X = rd.basis.transpose() * data.X;
    rd.Y = rd.basis.transpose() * data.Y;
    rd.mode_lift = data.Y * rd.rightvecs * rd.sv.cwiseInverse().asDiagonal();
    rd.dt = data.dt;
    return rd;
}

DmdResult spectrum_from_operator(const Mat& a, const ReducedData& rd, std::string method) {
    DmdResult res;
    res.A = a;
    res.method = std::move(method);

    const EigenPairs ep = linalg::eig(a);
    res.eigs_discrete = ep.values;
    res.eigs_continuous.resize(ep.values.size());
    for (Index j = 0; j < ep.values.size(); ++j)
        res.eigs_continuous(j) = std::log(ep.values(j)) / rd.dt;

    res.modes.resize(rd.mode_lift.rows(), ep.values.size());
    for (Index j = 0; j < ep.values.size(); ++j)
        res.modes.col(j) = (rd.mode_lift * ep.vectors.col(j)) / ep.values(j);
    return res;
}

DmdResult exact_dmd(const ReducedData& rd) {
    const Mat a = rd.Y * rd.rightvecs * rd.sv.cwiseInverse().asDiagonal();
    return spectrum_from_operator(a, rd, "exact");
}

DmdResult tls_dmd(const ReducedData& rd) {
    const Index r = rd.rank;
    const Index n = rd.X.cols();
    if (!(r < n / 2))
        throw NumericalError("tls_dmd: requires r < n/2 (got r=" + std::to_string(r) +
                             ", n=" + std::to_string(n) + ")");

    Mat stacked(2 * r, n);
    stacked.topRows(r) = rd.X;
    stacked.bottomRows(r) = rd.Y;
    const SvdFactors f = linalg::svd(stacked);
    const Mat u_r = f.U.leftCols(r);
    const Mat u_top = u_r.topRows(r);
    const Mat u_bot = u_r.bottomRows(r);

    Mat a;
    try {
        a = linalg::linsolve_right(u_top, u_bot);  // A * U_tr = U_br
    } catch (const IllConditionedError& e) {
        throw NumericalError(std::string("tls_dmd: top subspace block singular (") + e.what() +
                             ")");
    }
    return spectrum_from_operator(a, rd, "tlsdmd");
}

DmdResult fb_dmd(const SnapshotData& data, Index r, RankPolicy policy) {
    const ReducedData rd = pod_reduce(data, r, policy);

    // Forward and backward least-squares estimates, both expressed in the
    // X-side POD frame. A second, independent basis for the backward operator
    // would leave the product A_f * A_b^-1 at the mercy of the SVD's sign
    // and rotation gauge; one shared frame keeps it coherent and makes the
    // noiseless full-rank case agree with the plain estimator exactly.
    {
        const SvdFactors fy = linalg::svd(rd.Y);
        const double cutoff = static_cast<double>(std::max(rd.Y.rows(), rd.Y.cols())) *
                              std::numeric_limits<double>::epsilon() * fy.S(0);
        Index y_rank = 0;
        while (y_rank < fy.S.size() && fy.S(y_rank) > cutoff) ++y_rank;
        if (y_rank < rd.rank)
            throw RankDeficiencyError("fb_dmd: backward data does not admit rank " +
                                      std::to_string(rd.rank));
    }

    const Mat a_f = rd.Y * rd.rightvecs * rd.sv.cwiseInverse().asDiagonal();
    const Mat a_b = rd.X * linalg::pinv(rd.Y);

    Mat product;
    try {
        product = linalg::linsolve_right(a_b, a_f);  // A_f * A_b^-1
    } catch (const IllConditionedError& e) {
        throw NumericalError(std::string("fb_dmd: backward estimate singular (") + e.what() +
                             ")");
    }

    const CMat root = linalg::sqrtm(product);
    // Real matrix, no eigenvalue on the branch cut: the principal root is
    // real; anything imaginary left over is rounding noise.
    const double imag_norm = root.imag().norm();
    if (imag_norm > 1e-8 * std::max(1.0, root.norm()))
        throw NumericalError("fb_dmd: square root unexpectedly complex");
    return spectrum_from_operator(root.real(), rd, "fbdmd");
}

Mat reconstruct_trajectory(const DmdResult& res, const ReducedData& rd,
                           const Vec& x0, Index steps) {
    if (!x0.allFinite()) throw NumericalError("reconstruct_trajectory: non-finite start state");
    if (x0.size() != rd.basis.rows())
        throw NumericalError("reconstruct_trajectory: start state dimension mismatch");
    if (steps < 1) throw NumericalError("reconstruct_trajectory: need at least one step");

    Mat out(rd.basis.rows(), steps);
    Vec w = rd.basis.transpose() * x0;
    for (Index k = 0; k < steps; ++k) {
        out.col(k) = rd.basis * w;
        w = res.A * w;
    }
    return out;
}

}  // namespace cdmd
