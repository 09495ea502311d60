#include "cdmd/methods.hpp"

#include "cdmd/errors.hpp"
#include "cdmd/linalg.hpp"

namespace cdmd {

Method parse_method(const std::string& name) {
    if (name == "exact") return Method::Exact;
    if (name == "fbdmd") return Method::Fb;
    if (name == "tlsdmd") return Method::Tls;
    if (name == "cdmd") return Method::Cdmd;
    if (name == "cdmd2") return Method::Cdmd2;
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected exact|fbdmd|tlsdmd|cdmd|cdmd2)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Fb: return "fbdmd";
        case Method::Tls: return "tlsdmd";
        case Method::Cdmd: return "cdmd";
        case Method::Cdmd2: return "cdmd2";
    }
    throw std::logic_error("method_name: bad enum");
}

namespace {

// Backward operator for the non-ADMM methods: same estimator, roles swapped.
Mat swapped_operator(const SnapshotData& data, Index r, Method method,
                     const SolverOptions& opts) {
    const SnapshotData swapped = swap_roles(data);
    const ReducedData rd = pod_reduce(swapped, r, opts.rank_policy);
    if (method == Method::Tls) return tls_dmd(rd).A;
    return exact_dmd(rd).A;
}

}  // namespace

MethodOutput run_method(const SnapshotData& data, Index r, Method method,
                        const SolverOptions& opts, bool with_backward) {
    MethodOutput out;
    switch (method) {
        case Method::Exact: {
            const ReducedData rd = pod_reduce(data, r, opts.rank_policy);
            out.dmd = exact_dmd(rd);
            out.effective_rank = rd.rank;
            if (with_backward) {
                out.backward = swapped_operator(data, rd.rank, method, opts);
                out.has_backward = true;
            }
            break;
        }
        case Method::Fb: {
            out.dmd = fb_dmd(data, r, opts.rank_policy);
            out.effective_rank = out.dmd.A.rows();
            if (with_backward) {
                // the backward estimate fb itself is built from
                const ReducedData rd = pod_reduce(data, out.effective_rank, opts.rank_policy);
                out.backward = rd.X * linalg::pinv(rd.Y);
                out.has_backward = true;
            }
            break;
        }
        case Method::Tls: {
            const ReducedData rd = pod_reduce(data, r, opts.rank_policy);
            out.dmd = tls_dmd(rd);
            out.effective_rank = rd.rank;
            if (with_backward) {
                out.backward = swapped_operator(data, rd.rank, method, opts);
                out.has_backward = true;
            }
            break;
        }
        case Method::Cdmd: {
            const ReducedData rd = pod_reduce(data, r, opts.rank_policy);
            CdmdResult res = solve_cdmd(rd, opts.admm);
            out.dmd = std::move(res.dmd);
            out.backward = std::move(res.backward);
            out.has_backward = true;
            out.converged = res.converged;
            out.iterations = res.iterations;
            out.history = std::move(res.history);
            out.warnings = std::move(res.warnings);
            out.effective_rank = rd.rank;
            break;
        }
        case Method::Cdmd2: {
            const ReducedData rd = pod_reduce(data, r, opts.rank_policy);
            Cdmd2Result res = solve_cdmd2(rd, opts.admm2);
            out.dmd = std::move(res.dmd);
            out.backward = std::move(res.backward);
            out.has_backward = true;
            out.converged = res.converged;
            out.iterations = res.iterations;
            out.history = std::move(res.history);
            out.warnings = std::move(res.warnings);
            out.effective_rank = rd.rank;
            break;
        }
    }
    return out;
}

}  // namespace cdmd
