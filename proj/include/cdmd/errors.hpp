#pragma once

#include <stdexcept>
#include <string>

namespace cdmd {

/// Base for all numerical failures raised by the library.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A dense factorization (SVD, eigendecomposition, Schur) did not converge.
class FactorizationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Sylvester pencil is singular: some eigenvalue of C1 equals an eigenvalue
/// of -C2 within tolerance.
class SingularPencilError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Principal matrix square root undefined: eigenvalue on the closed negative
/// real axis within tolerance.
class BranchCutError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Linear solve rejected; carries the condition estimate that tripped the cap.
class IllConditionedError : public NumericalError {
public:
    IllConditionedError(const std::string& what, double cond)
        : NumericalError(what), condition(cond) {}
    double condition;
};

/// ADMM iterate became non-finite; carries the iteration index.
class DivergenceError : public NumericalError {
public:
    DivergenceError(const std::string& what, int iter)
        : NumericalError(what), iteration(iter) {}
    int iteration;
};

/// Requested POD rank exceeds the numerical rank of the data.
class RankDeficiencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Monte Carlo batch has no usable spread (all estimates identical or collinear).
class DegenerateBatchError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Malformed snapshot file. `where` is a byte offset for binary input and a
/// 1-based line number for CSV.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long long where_)
        : std::runtime_error(what), where(where_) {}
    long long where;
};

}  // namespace cdmd
