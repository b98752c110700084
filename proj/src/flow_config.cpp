#include "nlpm/flow_config.hpp"

#include "nlpm/errors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace nlpm {

std::string_view to_string(Formulation f) { return f == Formulation::Integrated ? "integrated" : "divergence"; }

Formulation parse_formulation(std::string_view name)
{
    if (name == "integrated") return Formulation::Integrated;
    if (name == "divergence") return Formulation::Divergence;
    throw InvalidArgument("unknown formulation '" + std::string(name) + "'");
}

std::string_view to_string(SolverChoice c)
{
    switch (c) {
    case SolverChoice::Auto: return "auto";
    case SolverChoice::Dense: return "dense";
    case SolverChoice::Krylov: return "krylov";
    }
    return "auto";
}

SolverChoice parse_solver_choice(std::string_view name)
{
    if (name == "auto") return SolverChoice::Auto;
    if (name == "dense") return SolverChoice::Dense;
    if (name == "krylov") return SolverChoice::Krylov;
    throw InvalidArgument("unknown solver '" + std::string(name) + "'");
}

double FlowConfig::operator_exponent() const
{
    if (gamma_override) return *gamma_override;
    return formulation == Formulation::Integrated ? 1.0 - epsilon : 0.5 * (1.0 - epsilon);
}

void FlowConfig::validate() const
{
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in [0, 1)");
    if (gamma_override && !(*gamma_override >= 0.0)) throw InvalidArgument("gamma must be >= 0");
    if (!(h_t > 0.0) || !std::isfinite(h_t)) throw InvalidArgument("time step must be positive");
    if (!(solver_tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
    if (solver_max_iter == 0) throw InvalidArgument("solver iteration limit must be positive");
}

namespace {
std::string exact(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

std::string FlowConfig::describe() const
{
    std::ostringstream out;
    out << "formulation=" << to_string(formulation) << " bc=" << to_string(bc) << " epsilon=" << exact(epsilon)
        << " gamma=" << exact(operator_exponent()) << " gamma_source=" << (gamma_override ? "override" : "default")
        << " ht=" << exact(h_t) << " steps=" << steps << " tol=" << exact(solver_tol)
        << " max_iter=" << solver_max_iter << " seed=" << seed << " solver=" << to_string(solver);
    return out.str();
}

} // namespace nlpm
