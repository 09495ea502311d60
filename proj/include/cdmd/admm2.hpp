#pragma once

#include "cdmd/admm.hpp"
#include "cdmd/dmd.hpp"
#include "cdmd/types.hpp"

#include <string>
#include <vector>

// Seven-block ADMM on the lifted consistency problem: the hard constraints
// AB = I, BA = I are replaced by AB = C, BA = C with C pulled toward the
// identity, and A, B are tied to proxy blocks A', B' through slack penalties.
// Every subproblem has a closed form (two Sylvester solves, two right-solves,
// three scalar blends), and the scheme converges for large enough penalty.

namespace cdmd {

struct Cdmd2Config {
    double rho0 = 1.0;
    double tau = 2.0;
    double mu_trigger = 5.0;  // residual-ratio trigger of the penalty update
    double eps_abs = 1e-8;
    double eps_rel = 1e-4;
    int max_iters = 500;
    bool adapt_rho = true;    // off: penalty frozen at rho0 (theory-faithful mode)
    double nu = 10.0;         // C-block penalty; large keeps C near identity
    double mu_reg = 1e-2;     // A''/B'' slack penalty; small keeps A near A'

    void validate() const;
};

struct Cdmd2State {
    Mat A, Ap, App;  // forward operator, its proxy, the slack
    Mat B, Bp, Bpp;  // backward triple
    Mat C;           // consistency block, pulled toward identity
    Mat Q1, Q2, Q3, Q4;
    double rho;
    int iter = 0;
};

struct Cdmd2Result {
    DmdResult dmd;
    Mat backward;
    Cdmd2State state;  // final iterate block, for diagnostics
    std::vector<ResidualRecord> history;
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> warnings;
};

/// 4-block stack (AB - C; BA - C; A - A' - A''; B - B' - B'').
Mat cdmd2_residual(const Cdmd2State& s);

/// Freshly initialized state: A = A' = YX^+, B = B' = XY^+, slacks zero,
/// C identity, duals zero.
Cdmd2State cdmd2_init(const Mat& x, const Mat& y, double rho0);

/// One full sweep in the fixed order A, A', B, B', C, A'', B'', dual ascent,
/// penalty update. `trace`, when non-null, receives one label per sub-update
/// so tests can pin the order; `rec`, when non-null, is filled with the
/// residuals evaluated after the dual ascent and before any penalty change.
Cdmd2State cdmd2_step(const Cdmd2State& s, const Mat& x, const Mat& y,
                      const Cdmd2Config& cfg,
                      std::vector<std::string>* trace = nullptr,
                      ResidualRecord* rec = nullptr);

/// Full solve with the 4-block primal / 7-block dual stopping rule.
Cdmd2Result solve_cdmd2(const ReducedData& rd, const Cdmd2Config& cfg = {});

}  // namespace cdmd
