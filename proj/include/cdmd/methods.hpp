#pragma once

#include "cdmd/admm.hpp"
#include "cdmd/admm2.hpp"
#include "cdmd/dmd.hpp"

#include <string>
#include <vector>

// Uniform front door over the five estimators, used by the harness and CLI.

namespace cdmd {

enum class Method { Exact, Fb, Tls, Cdmd, Cdmd2 };

Method parse_method(const std::string& name);  // exact|fbdmd|tlsdmd|cdmd|cdmd2
std::string method_name(Method m);

struct SolverOptions {
    AdmmConfig admm;
    Cdmd2Config admm2;
    RankPolicy rank_policy = RankPolicy::Clamp;
};

struct MethodOutput {
    DmdResult dmd;
    Mat backward;        // backward operator when requested (or ADMM by-product)
    bool has_backward = false;
    bool converged = true;      // ADMM methods may exhaust max_iters
    int iterations = 0;
    std::vector<ResidualRecord> history;  // ADMM methods only
    std::vector<std::string> warnings;
    Index effective_rank = 0;   // may be below the request under RankPolicy::Clamp
};

/// Runs one estimator end to end. Backward estimates: the ADMM methods hand
/// out their backward operator; fb exposes its own backward least-squares
/// estimate; exact/tls get the same estimator applied to the role-swapped
/// pair.
MethodOutput run_method(const SnapshotData& data, Index r, Method method,
                        const SolverOptions& opts = {}, bool with_backward = false);

}  // namespace cdmd
