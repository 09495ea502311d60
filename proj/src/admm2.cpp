#include "cdmd/admm2.hpp"

#include "cdmd/errors.hpp"
#include "cdmd/linalg.hpp"

#include <cmath>
#include <limits>

namespace cdmd {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

void trace_push(std::vector<std::string>* trace, const char* label) {
    if (trace) trace->emplace_back(label);
}
}  // namespace

void Cdmd2Config::validate() const {
    if (!(rho0 > 0.0)) throw NumericalError("Cdmd2Config: rho0 must be positive");
    if (!(tau > 1.0)) throw NumericalError("Cdmd2Config: tau must exceed 1");
    if (!(mu_trigger > 1.0)) throw NumericalError("Cdmd2Config: mu_trigger must exceed 1");
    if (!(eps_abs > 0.0) || !(eps_rel > 0.0))
        throw NumericalError("Cdmd2Config: tolerances must be positive");
    if (max_iters < 1) throw NumericalError("Cdmd2Config: max_iters must be positive");
    if (!(nu > 0.0)) throw NumericalError("Cdmd2Config: nu must be positive");
    if (!(mu_reg > 0.0)) throw NumericalError("Cdmd2Config: mu_reg must be positive");
}

Mat cdmd2_residual(const Cdmd2State& s) {
    const Index r = s.A.rows();
    Mat res(4 * r, r);
    res.block(0 * r, 0, r, r) = s.A * s.B - s.C;
    res.block(1 * r, 0, r, r) = s.B * s.A - s.C;
    res.block(2 * r, 0, r, r) = s.A - s.Ap - s.App;
    res.block(3 * r, 0, r, r) = s.B - s.Bp - s.Bpp;
    return res;
}

Cdmd2State cdmd2_init(const Mat& x, const Mat& y, double rho0) {
    const Index r = x.rows();
    Cdmd2State s;
    s.A = y * linalg::pinv(x);
    s.Ap = s.A;
    s.App = Mat::Zero(r, r);
    s.B = x * linalg::pinv(y);
    s.Bp = s.B;
    s.Bpp = Mat::Zero(r, r);
    s.C = Mat::Identity(r, r);
    s.Q1 = Mat::Zero(r, r);
    s.Q2 = Mat::Zero(r, r);
    s.Q3 = Mat::Zero(r, r);
    s.Q4 = Mat::Zero(r, r);
    s.rho = rho0;
    return s;
}

Cdmd2State cdmd2_step(const Cdmd2State& prev, const Mat& x, const Mat& y,
                      const Cdmd2Config& cfg, std::vector<std::string>* trace,
                      ResidualRecord* rec) {
    const Index r = prev.A.rows();
    const Mat eye = Mat::Identity(r, r);
    Cdmd2State s = prev;
    const double rho = s.rho;

    // A-block: (I + B^T B) A + A (B B^T) = (C-Q1)B^T + B^T(C-Q2) + A' + A'' - Q3
    {
        const Mat bt = s.B.transpose();
        const Mat a1 = eye + bt * s.B;
        const Mat a2 = s.B * bt;
        const Mat a3 = (s.C - s.Q1) * bt + bt * (s.C - s.Q2) + s.Ap + s.App - s.Q3;
        s.A = linalg::sylvester_solve(a1, a2, a3);
        trace_push(trace, "A");
    }

    // A'-block: A'(rho I + X X^T) = Y X^T + rho (A - A'' + Q3)
    {
        const Mat lhs = rho * eye + x * x.transpose();
        const Mat rhs = y * x.transpose() + rho * (s.A - s.App + s.Q3);
        s.Ap = linalg::linsolve_right(lhs, rhs);
        trace_push(trace, "Ap");
    }

    // B-block: (I + A^T A) B + B (A A^T) = A^T(C-Q1) + (C-Q2)A^T + B' + B'' - Q4
    {
        const Mat at = s.A.transpose();
        const Mat b1 = eye + at * s.A;
        const Mat b2 = s.A * at;
        const Mat b3 = at * (s.C - s.Q1) + (s.C - s.Q2) * at + s.Bp + s.Bpp - s.Q4;
        s.B = linalg::sylvester_solve(b1, b2, b3);
        trace_push(trace, "B");
    }

    // B'-block: B'(rho I + Y Y^T) = X Y^T + rho (B - B'' + Q4)
    {
        const Mat lhs = rho * eye + y * y.transpose();
        const Mat rhs = x * y.transpose() + rho * (s.B - s.Bpp + s.Q4);
        s.Bp = linalg::linsolve_right(lhs, rhs);
        trace_push(trace, "Bp");
    }

    // (C, A'', B'')-block, three independent closed forms.
    s.C = rho / (2.0 * rho + cfg.nu) * (s.A * s.B + s.B * s.A + s.Q1 + s.Q2) +
          cfg.nu / (2.0 * rho + cfg.nu) * eye;
    trace_push(trace, "C");
    s.App = rho / (cfg.mu_reg + rho) * (s.A - s.Ap + s.Q3);
    trace_push(trace, "App");
    s.Bpp = rho / (cfg.mu_reg + rho) * (s.B - s.Bp + s.Q4);
    trace_push(trace, "Bpp");

    // Dual ascent.
    const Mat resid = cdmd2_residual(s);
    s.Q1 += resid.block(0 * r, 0, r, r);
    s.Q2 += resid.block(1 * r, 0, r, r);
    s.Q3 += resid.block(2 * r, 0, r, r);
    s.Q4 += resid.block(3 * r, 0, r, r);
    trace_push(trace, "Q");

    const double primal = resid.norm();
    const double dual =
        s.rho * std::sqrt((s.A - prev.A).squaredNorm() + (s.Ap - prev.Ap).squaredNorm() +
                          (s.B - prev.B).squaredNorm() + (s.Bp - prev.Bp).squaredNorm() +
                          (s.C - prev.C).squaredNorm() + (s.App - prev.App).squaredNorm() +
                          (s.Bpp - prev.Bpp).squaredNorm());
    if (rec) {
        const double rr = static_cast<double>(r);
        const double q_norm = std::sqrt(s.Q1.squaredNorm() + s.Q2.squaredNorm() +
                                        s.Q3.squaredNorm() + s.Q4.squaredNorm());
        const double scale =
            std::max({(s.A * s.B).norm(), (s.B * s.A).norm(), s.C.norm(),
                      (s.Ap + s.App).norm(), (s.Bp + s.Bpp).norm()});
        rec->primal = primal;
        rec->dual = dual;
        rec->objective =
            0.5 * (s.Ap * x - y).squaredNorm() + 0.5 * (x - s.Bp * y).squaredNorm();
        rec->eps_pri = std::sqrt(4.0 * rr) * cfg.eps_abs + cfg.eps_rel * scale;
        rec->eps_dual = std::sqrt(7.0 * rr) * cfg.eps_abs + cfg.eps_rel * s.rho * q_norm;
        rec->rho = s.rho;
    }

    // Penalty update, same trigger and dual rescale as the two-block scheme.
    if (cfg.adapt_rho) {
        const double rho_next = update_rho(s.rho, primal, dual, cfg.tau, cfg.mu_trigger);
        if (rho_next != s.rho) {
            const double factor = s.rho / rho_next;
            s.Q1 *= factor;
            s.Q2 *= factor;
            s.Q3 *= factor;
            s.Q4 *= factor;
            s.rho = rho_next;
        }
    }
    trace_push(trace, "rho");

    s.iter = prev.iter + 1;
    return s;
}

Cdmd2Result solve_cdmd2(const ReducedData& rd, const Cdmd2Config& cfg) {
    cfg.validate();
    const Mat& x = rd.X;
    const Mat& y = rd.Y;

    Cdmd2Result out;
    {
        const double rank_tol = static_cast<double>(std::max(x.rows(), x.cols())) * kEps;
        const SvdFactors fx = linalg::svd(x);
        if (fx.S(fx.S.size() - 1) <= rank_tol * fx.S(0))
            out.warnings.push_back("cdmd2: X is numerically rank deficient");
        const SvdFactors fy = linalg::svd(y);
        if (fy.S(fy.S.size() - 1) <= rank_tol * fy.S(0))
            out.warnings.push_back("cdmd2: Y is numerically rank deficient");
    }

    Cdmd2State s = cdmd2_init(x, y, cfg.rho0);
    out.history.reserve(static_cast<std::size_t>(cfg.max_iters));

    for (int k = 0; k < cfg.max_iters; ++k) {
        ResidualRecord rec;
        s = cdmd2_step(s, x, y, cfg, nullptr, &rec);
        out.history.push_back(rec);

        if (!s.A.allFinite() || !s.B.allFinite() || !std::isfinite(rec.primal))
            throw DivergenceError("cdmd2: iterate became non-finite", k);

        if (rec.primal <= rec.eps_pri && rec.dual <= rec.eps_dual) {
            out.converged = true;
            break;
        }
    }

    out.iterations = s.iter;
    out.backward = s.B;
    out.dmd = spectrum_from_operator(s.A, rd, "cdmd2");
    out.state = std::move(s);
    return out;
}

}  // namespace cdmd
