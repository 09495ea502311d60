#include "cdmd/admm.hpp"

#include "cdmd/errors.hpp"
#include "cdmd/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cdmd {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

void AdmmConfig::validate() const {
    if (!(rho0 > 0.0)) throw NumericalError("AdmmConfig: rho0 must be positive");
    if (!(tau > 1.0)) throw NumericalError("AdmmConfig: tau must exceed 1");
    if (!(mu > 1.0)) throw NumericalError("AdmmConfig: mu must exceed 1");
    if (!(eps_abs > 0.0) || !(eps_rel > 0.0))
        throw NumericalError("AdmmConfig: tolerances must be positive");
    if (max_iters < 1) throw NumericalError("AdmmConfig: max_iters must be positive");
}

Mat consistency_residual(const Mat& a, const Mat& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw NumericalError("consistency_residual: operands must be square and equal-sized");
    const Index r = a.rows();
    Mat res(2 * r, r);
    res.topRows(r) = a * b - Mat::Identity(r, r);
    res.bottomRows(r) = b * a - Mat::Identity(r, r);
    return res;
}

double cdmd_objective(const Mat& a, const Mat& b, const Mat& x, const Mat& y) {
    return 0.5 * (a * x - y).squaredNorm() + 0.5 * (x - b * y).squaredNorm();
}

Mat update_A(const AdmmState& s, const Mat& x, const Mat& y) {
    const double rho = s.rho;
    const Mat bt = s.B.transpose();
    const Mat c1 = rho * bt * s.B;
    const Mat c2 = x * x.transpose() + rho * s.B * bt;
    const Mat c3 = y * x.transpose() + 2.0 * rho * bt - rho * s.Q1 * bt - rho * bt * s.Q2;
    return linalg::sylvester_solve(c1, c2, c3);
}

Mat update_B(const AdmmState& s, const Mat& x, const Mat& y) {
    const double rho = s.rho;
    const Mat at = s.A.transpose();
    const Mat d1 = rho * at * s.A;
    const Mat d2 = y * y.transpose() + rho * s.A * at;
    const Mat d3 = x * y.transpose() + 2.0 * rho * at - rho * at * s.Q1 - rho * s.Q2 * at;
    return linalg::sylvester_solve(d1, d2, d3);
}

double update_rho(double rho, double primal, double dual, double tau, double mu) {
    if (primal > mu * dual) return rho * tau;
    if (dual > mu * primal) return rho / tau;
    return rho;
}

CdmdResult solve_cdmd(const ReducedData& rd, const AdmmConfig& cfg) {
    cfg.validate();
    const Mat& x = rd.X;
    const Mat& y = rd.Y;
    const Index r = rd.rank;

    CdmdResult out;

    // The strong-convexity argument for the subproblems wants full row rank;
    // the penalty terms keep the Sylvester coefficients nonsingular anyway,
    // so rank-deficient data only earns a warning.
    {
        const double rank_tol = static_cast<double>(std::max(x.rows(), x.cols())) * kEps;
        const SvdFactors fx = linalg::svd(x);
        if (fx.S(fx.S.size() - 1) <= rank_tol * fx.S(0))
            out.warnings.push_back("cdmd: X is numerically rank deficient");
        const SvdFactors fy = linalg::svd(y);
        if (fy.S(fy.S.size() - 1) <= rank_tol * fy.S(0))
            out.warnings.push_back("cdmd: Y is numerically rank deficient");
    }

    AdmmState s;
    s.A = y * linalg::pinv(x);
    s.B = x * linalg::pinv(y);
    s.Q1 = Mat::Zero(r, r);
    s.Q2 = Mat::Zero(r, r);
    s.rho = cfg.rho0;

    out.history.reserve(static_cast<std::size_t>(cfg.max_iters));

    const double sqrt_r = std::sqrt(static_cast<double>(r));
    const double sqrt_2r = std::sqrt(2.0 * static_cast<double>(r));

    for (int k = 0; k < cfg.max_iters; ++k) {
        const Mat a_prev = s.A;
        const Mat b_prev = s.B;

        s.A = update_A(s, x, y);
        s.B = update_B(s, x, y);  // sees the fresh A, duals still at k

        const Mat ab = s.A * s.B;
        const Mat ba = s.B * s.A;
        Mat resid(2 * r, r);
        resid.topRows(r) = ab - Mat::Identity(r, r);
        resid.bottomRows(r) = ba - Mat::Identity(r, r);
        s.Q1 += resid.topRows(r);
        s.Q2 += resid.bottomRows(r);

        const double primal = resid.norm();
        const double dual =
            s.rho * std::sqrt((s.A - a_prev).squaredNorm() + (s.B - b_prev).squaredNorm());
        const double q_norm = std::sqrt(s.Q1.squaredNorm() + s.Q2.squaredNorm());

        ResidualRecord rec;
        rec.primal = primal;
        rec.dual = dual;
        rec.objective = cdmd_objective(s.A, s.B, x, y);
        rec.eps_pri = sqrt_r * cfg.eps_abs + cfg.eps_rel * std::max(ab.norm(), ba.norm());
        rec.eps_dual = sqrt_2r * cfg.eps_abs + cfg.eps_rel * s.rho * q_norm;
        rec.rho = s.rho;
        out.history.push_back(rec);
        s.iter = k + 1;

        if (!s.A.allFinite() || !s.B.allFinite() || !std::isfinite(primal))
            throw DivergenceError("cdmd: iterate became non-finite", k);

        if (primal <= rec.eps_pri && dual <= rec.eps_dual) {
            out.converged = true;
            break;
        }

        if (cfg.adapt_rho) {
            const double rho_next = update_rho(s.rho, primal, dual, cfg.tau, cfg.mu);
            if (rho_next != s.rho) {
                const double factor = s.rho / rho_next;  // keep rho*Q continuous
                s.Q1 *= factor;
                s.Q2 *= factor;
                s.rho = rho_next;
            }
        }
    }

    out.iterations = s.iter;
    out.backward = s.B;
    out.dmd = spectrum_from_operator(s.A, rd, "cdmd");
    return out;
}

}  // namespace cdmd
