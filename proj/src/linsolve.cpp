#include "nlpm/linsolve.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace nlpm::linsolve {

std::string_view to_string(Method m) { return m == Method::Dense ? "dense" : "krylov"; }

namespace {

double dot(const GridField& a, const GridField& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm(const GridField& a) { return std::sqrt(dot(a, a)); }

// y += alpha * x
void axpy(double alpha, const GridField& x, GridField& y)
{
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += alpha * x[k];
}

void require_shape(const GridField& expected, const GridField& got)
{
    if (!expected.same_shape(got)) throw InvalidArgument("linear operator changed the field shape");
}

} // namespace

double relative_residual(const LinearOperator& apply, const GridField& x, const GridField& rhs)
{
    GridField r = apply(x);
    require_shape(rhs, r);
    r -= rhs;
    const double b = norm(rhs);
    const double res = norm(r);
    if (b == 0.0) return res;
    return res / b;
}

Solution solve_dense(const LinearOperator& apply, const GridField& rhs)
{
    const std::size_t dimension = rhs.size();
    if (dimension > max_dense_dimension) {
        throw InvalidSize("dense solve limited to dimension " + std::to_string(max_dense_dimension) + ", got " +
                          std::to_string(dimension));
    }
    const auto N = static_cast<Eigen::Index>(dimension);
    Eigen::MatrixXd matrix(N, N);
    GridField unit(rhs.n(), rhs.dim(), rhs.bc());
    for (Eigen::Index j = 0; j < N; ++j) {
        unit[static_cast<std::size_t>(j)] = 1.0;
        const GridField column = apply(unit);
        require_shape(rhs, column);
        for (Eigen::Index i = 0; i < N; ++i) matrix(i, j) = column[static_cast<std::size_t>(i)];
        unit[static_cast<std::size_t>(j)] = 0.0;
    }

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(matrix);
    const double rcond = lu.rcond();
    if (!(rcond * singular_condition_limit >= 1.0)) {
        throw SingularSystem("dense system is singular or ill-conditioned (reciprocal condition estimate " +
                             std::to_string(rcond) + ")");
    }

    const Eigen::Map<const Eigen::VectorXd> b(rhs.values().data(), N);
    Eigen::VectorXd x = lu.solve(b);
    // One round of iterative refinement against the assembled matrix.
    const Eigen::VectorXd correction = lu.solve(b - matrix * x);
    x += correction;

    GridField solution(rhs.n(), rhs.dim(), rhs.bc(), std::vector<double>(x.data(), x.data() + N));
    SolveReport report;
    report.method = Method::Dense;
    report.iterations = 1;
    report.relative_residual = relative_residual(apply, solution, rhs);
    if (report.relative_residual > dense_residual_tolerance) {
        throw SolverFailure("dense solve residual " + std::to_string(report.relative_residual) +
                                " exceeds tolerance",
                            report, solution);
    }
    return {std::move(solution), report};
}

namespace {

// Krylov iterations run on the system scaled to a unit right-hand side so the
// breakdown threshold is independent of the data magnitude.
class KrylovRun {
public:
    KrylovRun(const LinearOperator& apply, const LinearOperator& precond, const KrylovOptions& options,
              const GridField& b)
        : apply_(apply), precond_(precond), options_(options), b_(b), best_(b.n(), b.dim(), b.bc())
    {
        report_.method = Method::Krylov;
        report_.relative_residual = 1.0;
    }

    Solution run()
    {
        return options_.kind == KrylovKind::ConjugateGradient ? conjugate_gradient() : bicgstab();
    }

private:
    GridField A(const GridField& v) const
    {
        GridField out = apply_(v);
        require_shape(b_, out);
        return out;
    }

    GridField M(const GridField& v) const { return precond_ ? precond_(v) : v; }

    void track(const GridField& x, double residual)
    {
        if (residual < report_.relative_residual) {
            report_.relative_residual = residual;
            best_ = x;
        }
    }

    [[noreturn]] void breakdown(const char* where)
    {
        throw Breakdown(std::string("Krylov breakdown: ") + where + " below threshold", report_, best_);
    }

    // Returns true when the true residual of x meets the tolerance; otherwise
    // replaces r by the true residual so the iteration can restart from it.
    bool confirm(const GridField& x, GridField& r)
    {
        r = b_;
        r -= A(x);
        const double res = norm(r);
        track(x, res);
        return res <= options_.tol;
    }

    Solution finish(GridField x)
    {
        report_.relative_residual = relative_residual(apply_, x, b_);
        return {std::move(x), report_};
    }

    Solution bicgstab()
    {
        GridField x(b_.n(), b_.dim(), b_.bc());
        GridField r = b_;
        GridField r_hat = r;
        GridField p(b_.n(), b_.dim(), b_.bc());
        GridField v = p;
        double rho = 1.0, alpha = 1.0, omega = 1.0;

        for (std::size_t it = 1; it <= options_.max_iter; ++it) {
            report_.iterations = it;
            const double rho_next = dot(r_hat, r);
            if (std::abs(rho_next) < breakdown_threshold) breakdown("<r_hat, r>");
            const double beta = (rho_next / rho) * (alpha / omega);
            for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + beta * (p[k] - omega * v[k]);

            const GridField p_hat = M(p);
            v = A(p_hat);
            const double denom = dot(r_hat, v);
            if (std::abs(denom) < breakdown_threshold) breakdown("<r_hat, v>");
            alpha = rho_next / denom;

            GridField s = r;
            axpy(-alpha, v, s);
            if (norm(s) <= options_.tol) {
                axpy(alpha, p_hat, x);
                if (confirm(x, r)) return finish(std::move(x));
                restart(r, r_hat, p, v, rho, alpha, omega);
                continue;
            }

            const GridField s_hat = M(s);
            const GridField t = A(s_hat);
            const double tt = dot(t, t);
            if (tt < breakdown_threshold) breakdown("<t, t>");
            omega = dot(t, s) / tt;
            axpy(alpha, p_hat, x);
            axpy(omega, s_hat, x);
            r = s;
            axpy(-omega, t, r);
            const double res = norm(r);
            track(x, res);
            if (res <= options_.tol) {
                if (confirm(x, r)) return finish(std::move(x));
                restart(r, r_hat, p, v, rho, alpha, omega);
                continue;
            }
            if (std::abs(omega) < breakdown_threshold) breakdown("omega");
            rho = rho_next;
        }
        throw SolverFailure("BiCGStab did not converge in " + std::to_string(options_.max_iter) +
                                " iterations (relative residual " + std::to_string(report_.relative_residual) + ")",
                            report_, best_);
    }

    static void restart(const GridField& r, GridField& r_hat, GridField& p, GridField& v, double& rho,
                        double& alpha, double& omega)
    {
        r_hat = r;
        p *= 0.0;
        v *= 0.0;
        rho = alpha = omega = 1.0;
    }

    Solution conjugate_gradient()
    {
        GridField x(b_.n(), b_.dim(), b_.bc());
        GridField r = b_;
        GridField z = M(r);
        GridField p = z;
        double rz = dot(r, z);
        if (std::abs(rz) < breakdown_threshold) breakdown("<r, z>");

        for (std::size_t it = 1; it <= options_.max_iter; ++it) {
            report_.iterations = it;
            const GridField q = A(p);
            const double pq = dot(p, q);
            if (std::abs(pq) < breakdown_threshold) breakdown("<p, Ap>");
            const double alpha = rz / pq;
            axpy(alpha, p, x);
            axpy(-alpha, q, r);
            const double res = norm(r);
            track(x, res);
            if (res <= options_.tol) {
                if (confirm(x, r)) return finish(std::move(x));
            }
            z = M(r);
            const double rz_next = dot(r, z);
            if (std::abs(rz_next) < breakdown_threshold) breakdown("<r, z>");
            const double beta = rz_next / rz;
            for (std::size_t k = 0; k < p.size(); ++k) p[k] = z[k] + beta * p[k];
            rz = rz_next;
        }
        throw SolverFailure("conjugate gradient did not converge in " + std::to_string(options_.max_iter) +
                                " iterations (relative residual " + std::to_string(report_.relative_residual) + ")",
                            report_, best_);
    }

    const LinearOperator& apply_;
    const LinearOperator& precond_;
    const KrylovOptions& options_;
    const GridField& b_;
    SolveReport report_;
    GridField best_;
};

} // namespace

Solution solve_krylov(const LinearOperator& apply, const GridField& rhs, const LinearOperator& precond,
                      const KrylovOptions& options)
{
    if (!(options.tol > 0.0)) throw InvalidArgument("Krylov tolerance must be positive");
    const double scale = norm(rhs);
    if (scale == 0.0) {
        SolveReport report;
        report.method = Method::Krylov;
        return {GridField(rhs.n(), rhs.dim(), rhs.bc()), report};
    }
    GridField b = rhs;
    b *= 1.0 / scale;
    try {
        Solution sol = KrylovRun(apply, precond, options, b).run();
        sol.x *= scale;
        return sol;
    } catch (Breakdown& e) {
        throw Breakdown(e.what(), e.report(), scale * e.best_iterate());
    } catch (SolverFailure& e) {
        throw SolverFailure(e.what(), e.report(), scale * e.best_iterate());
    }
}

Preconditioner make_constant_coefficient_preconditioner(const GridField& a, double h_t, const spectral::Spectrum& s)
{
    if (!s.matches(a)) throw InvalidArgument("diffusivity does not match spectrum");
    const double mean_a = a.mean();
    const double c = h_t * mean_a;
    LinearOperator apply = [c, s](const GridField& v) {
        return spectral::apply_spectral_multiplier(v, s, [c](double lambda) { return 1.0 / (1.0 + c * lambda); });
    };
    return {std::move(apply), mean_a};
}

} // namespace nlpm::linsolve
