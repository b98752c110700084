#pragma once

// Solvers for the per-step linear systems: dense LU for small systems,
// matrix-free preconditioned Krylov iteration otherwise.

#include "nlpm/errors.hpp"
#include "nlpm/grid.hpp"
#include "nlpm/spectral.hpp"

#include <cstddef>
#include <functional>
#include <string_view>

namespace nlpm::linsolve {

enum class Method { Dense, Krylov };
std::string_view to_string(Method m);

struct SolveReport {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    Method method = Method::Dense;
    // Mean diffusivity used by the constant-coefficient preconditioner (0 when none).
    double preconditioner_coefficient = 0.0;
};

// A linear map on fields of one fixed shape. Must be pure.
using LinearOperator = std::function<GridField(const GridField&)>;

struct Solution {
    GridField x;
    SolveReport report;
};

// Iteration did not reach the tolerance. Carries the best iterate seen.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, SolveReport report, GridField best)
        : Error(what), report_(report), best_(std::move(best)) {}
    const SolveReport& report() const noexcept { return report_; }
    const GridField& best_iterate() const noexcept { return best_; }

private:
    SolveReport report_;
    GridField best_;
};

// An inner product fell below the breakdown threshold.
class Breakdown : public SolverFailure {
public:
    using SolverFailure::SolverFailure;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

inline constexpr std::size_t max_dense_dimension = 4096;
inline constexpr double dense_residual_tolerance = 1e-10;
inline constexpr double singular_condition_limit = 1e12;
inline constexpr double breakdown_threshold = 1e-30;

// ||apply(x) - rhs||_2 / ||rhs||_2, recomputed from scratch (0 for a zero rhs and zero x).
double relative_residual(const LinearOperator& apply, const GridField& x, const GridField& rhs);

// Assembles the matrix column by column from unit vectors and solves by LU.
Solution solve_dense(const LinearOperator& apply, const GridField& rhs);

enum class KrylovKind { BiCGStab, ConjugateGradient };

struct KrylovOptions {
    double tol = 1e-10;
    std::size_t max_iter = 500;
    KrylovKind kind = KrylovKind::BiCGStab; // ConjugateGradient requires a symmetric positive operator
};

// Zero initial guess, right preconditioning for BiCGStab. An empty `precond` means none.
Solution solve_krylov(const LinearOperator& apply, const GridField& rhs, const LinearOperator& precond,
                      const KrylovOptions& options);

struct Preconditioner {
    LinearOperator apply;
    double coefficient; // mean of the diffusivity
};

// Exact spectral inverse of (I - h_t * mean(a) * A).
Preconditioner make_constant_coefficient_preconditioner(const GridField& a, double h_t,
                                                        const spectral::Spectrum& s);

} // namespace nlpm::linsolve
