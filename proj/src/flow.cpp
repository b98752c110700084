#include "nlpm/flow.hpp"

#include <cmath>
#include <string>

namespace nlpm::flow {

namespace {

void require_match(const GridField& f, const Spectrum& s, const char* what)
{
    if (!s.matches(f)) throw InvalidArgument(std::string(what) + " does not match the spectrum");
}

bool use_dense(const FlowConfig& cfg, const GridField& u)
{
    switch (cfg.solver) {
    case SolverChoice::Dense: return true;
    case SolverChoice::Krylov: return false;
    case SolverChoice::Auto: break;
    }
    return u.dim() == 1 && u.n() <= 512;
}

StepResult solve_step(const linsolve::LinearOperator& op, const GridField& u, const GridField& a,
                      const FlowConfig& cfg, const Spectrum& s, linsolve::KrylovKind kind)
{
    const auto precond = linsolve::make_constant_coefficient_preconditioner(a, cfg.h_t, s);
    // Solve for the increment d = u' - u, op(d) = u - op(u). Fields with A u = 0
    // on the grid then stay fixed exactly, and round-off scales with the change.
    GridField rhs = u;
    rhs -= op(u);
    linsolve::Solution sol;
    if (use_dense(cfg, u)) {
        sol = linsolve::solve_dense(op, rhs);
    } else {
        sol = linsolve::solve_krylov(op, rhs, precond.apply, {cfg.solver_tol, cfg.solver_max_iter, kind});
    }
    sol.report.preconditioner_coefficient = precond.coefficient;
    sol.x += u;
    return {std::move(sol.x), sol.report};
}

} // namespace

GridField diffusivity(const GridField& u, double gamma, const Spectrum& s)
{
    GridField a = spectral::apply_operator_power(u, gamma, s);
    for (double& v : a.values()) v = 1.0 / (1.0 + v * v);
    return a;
}

GridField divergence_operator(const GridField& v, const GridField& a, const Spectrum& s)
{
    require_match(a, s, "diffusivity");
    auto flux = spectral::spectral_gradient(v, s);
    for (auto& component : flux)
        for (std::size_t k = 0; k < component.size(); ++k) component[k] *= a[k];
    GridField out = spectral::gradient_adjoint(flux, s);
    out *= -1.0;
    return out;
}

StepResult step_integrated(const GridField& u, const GridField& a, const FlowConfig& cfg, const Spectrum& s)
{
    require_match(u, s, "state");
    require_match(a, s, "diffusivity");
    const double h = cfg.h_t;
    const linsolve::LinearOperator op = [&a, &s, h](const GridField& x) {
        GridField y = spectral::apply_laplacian(x, s);
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[k] - h * a[k] * y[k];
        return y;
    };
    return solve_step(op, u, a, cfg, s, linsolve::KrylovKind::BiCGStab);
}

StepResult step_divergence(const GridField& u, const GridField& a, const FlowConfig& cfg, const Spectrum& s)
{
    require_match(u, s, "state");
    require_match(a, s, "diffusivity");
    const double h = cfg.h_t;
    const linsolve::LinearOperator op = [&a, &s, h](const GridField& x) {
        GridField y = divergence_operator(x, a, s);
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[k] - h * y[k];
        return y;
    };
    return solve_step(op, u, a, cfg, s, linsolve::KrylovKind::ConjugateGradient);
}

StepResult step(const GridField& u, const FlowConfig& cfg, const Spectrum& s)
{
    const GridField a = diffusivity(u, cfg.operator_exponent(), s);
    return cfg.formulation == Formulation::Integrated ? step_integrated(u, a, cfg, s) : step_divergence(u, a, cfg, s);
}

FlowResult run_flow(const GridField& u0, const FlowConfig& cfg, const Spectrum& s, const StepObserver& observer)
{
    cfg.validate();
    if (u0.bc() != cfg.bc) throw InvalidArgument("initial state boundary condition differs from the configuration");
    require_match(u0, s, "initial state");

    diagnostics::ConservationLedger ledger(cfg, s);
    FlowResult result{u0, {}};
    ledger.add(result.state);
    for (std::size_t k = 0; k < cfg.steps; ++k) {
        try {
            StepResult next = step(result.state, cfg, s);
            result.state = std::move(next.u);
            ledger.add(result.state);
            if (observer) observer(k + 1, result.state, next.report);
        } catch (const Error& e) {
            result.records = ledger.records();
            throw FlowError("step " + std::to_string(k + 1) + " failed: " + e.what(), k + 1, std::move(result));
        }
    }
    result.records = ledger.records();
    return result;
}

GridField integrate_image(const GridField& img)
{
    if (img.dim() != 1) throw Unsupported("integrate_image supports 1D fields only");
    const std::size_t n = img.n();
    if (n == 0) throw InvalidSize("empty field");
    const BoundaryCondition bc = img.bc();

    // Values at x = 0 and x = 1 implied by the boundary condition.
    double left = 0.0, right = 0.0;
    switch (bc) {
    case BoundaryCondition::Periodic: left = right = img[0]; break;
    case BoundaryCondition::Neumann: left = img[0]; right = img[n - 1]; break;
    case BoundaryCondition::Dirichlet: break;
    }

    std::vector<double> cumulative(n);
    double x_prev = 0.0, f_prev = left, acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = img.node(j);
        acc += 0.5 * (x - x_prev) * (f_prev + img[j]);
        cumulative[j] = acc;
        x_prev = x;
        f_prev = img[j];
    }
    const double total = acc + 0.5 * (1.0 - x_prev) * (f_prev + right);

    GridField w(n, 1, bc);
    for (std::size_t j = 0; j < n; ++j) w[j] = cumulative[j] - img.node(j) * total;
    return w;
}

GridField differentiate_state(const GridField& w, double mean)
{
    if (w.dim() != 1) throw Unsupported("differentiate_state supports 1D fields only");
    return differentiate_state(w, mean, spectral::build_spectrum(w.n(), w.bc(), 1));
}

GridField differentiate_state(const GridField& w, double mean, const Spectrum& s)
{
    if (w.dim() != 1) throw Unsupported("differentiate_state supports 1D fields only");
    GridField u = std::move(spectral::spectral_gradient(w, s).front());
    for (double& v : u.values()) v += mean;
    return u;
}

} // namespace nlpm::flow
