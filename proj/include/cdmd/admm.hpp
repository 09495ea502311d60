#pragma once

#include "cdmd/dmd.hpp"
#include "cdmd/types.hpp"

#include <string>
#include <vector>

// ADMM solver for the consistency-constrained decomposition: minimize
// 0.5|AX-Y|_F^2 + 0.5|X-BY|_F^2 subject to AB = I and BA = I, split so each
// sweep solves two Sylvester equations and performs a dual ascent step.

namespace cdmd {

struct AdmmConfig {
    double rho0 = 1.0;      // initial penalty
    double tau = 2.0;       // penalty multiplier
    double mu = 5.0;        // primal/dual ratio that triggers a penalty change
    double eps_abs = 1e-8;
    double eps_rel = 1e-4;
    int max_iters = 500;
    bool adapt_rho = true;  // off: penalty frozen at rho0

    void validate() const;
};

/// One solver sweep's worth of iterates.
struct AdmmState {
    Mat A;       // forward operator, r x r
    Mat B;       // backward operator, r x r
    Mat Q1;      // scaled dual block paired with AB - I
    Mat Q2;      // scaled dual block paired with BA - I
    double rho;
    int iter = 0;
};

/// Per-iteration convergence record, streamed to the caller.
struct ResidualRecord {
    double primal;     // |R(A,B)|_F
    double dual;       // rho * |(dA; dB)|_F
    double objective;  // 0.5|AX-Y|^2 + 0.5|X-BY|^2
    double eps_pri;
    double eps_dual;
    double rho;
};

/// Decomposition plus the solver by-products.
struct CdmdResult {
    DmdResult dmd;
    Mat backward;  // final B
    std::vector<ResidualRecord> history;
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> warnings;
};

/// Vertical stack (AB - I; BA - I), the feasibility residual.
Mat consistency_residual(const Mat& a, const Mat& b);

/// 0.5|AX-Y|_F^2 + 0.5|X-BY|_F^2.
double cdmd_objective(const Mat& a, const Mat& b, const Mat& x, const Mat& y);

/// Minimizer of the augmented Lagrangian over A with B, Q, rho fixed
/// (one Sylvester solve).
Mat update_A(const AdmmState& state, const Mat& x, const Mat& y);

/// Minimizer over B with A, Q, rho fixed (mirrored Sylvester solve).
Mat update_B(const AdmmState& state, const Mat& x, const Mat& y);

/// Adaptive penalty: grow by tau when the primal residual dominates, shrink
/// when the dual does, leave alone otherwise. The caller rescales the scaled
/// dual by the inverse factor when the penalty changes.
double update_rho(double rho, double primal, double dual, double tau, double mu);

/// Full solve: initialized from the least-squares pair (YX^+, XY^+), iterated
/// until both residuals pass their tolerances or max_iters.
CdmdResult solve_cdmd(const ReducedData& rd, const AdmmConfig& cfg = {});

}  // namespace cdmd
