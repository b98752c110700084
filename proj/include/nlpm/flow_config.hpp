#pragma once

#include "nlpm/grid.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nlpm {

// Integrated: the state is the antiderivative u, evolving by u_t = a(u) A u.
// Divergence: the state is the image, evolving by u_t = div(a(u) grad u).
enum class Formulation { Integrated, Divergence };

std::string_view to_string(Formulation f);
Formulation parse_formulation(std::string_view name);

enum class SolverChoice { Auto, Dense, Krylov };

std::string_view to_string(SolverChoice c);
SolverChoice parse_solver_choice(std::string_view name);

// Everything one run depends on. epsilon = 0 with the Integrated formulation is
// the discrete Perona-Malik scheme, whose continuum limit is ill-posed.
struct FlowConfig {
    double epsilon = 0.1;
    std::optional<double> gamma_override;
    double h_t = 0.06;
    std::size_t steps = 100;
    BoundaryCondition bc = BoundaryCondition::Periodic;
    Formulation formulation = Formulation::Integrated;
    double solver_tol = 1e-10;
    std::size_t solver_max_iter = 500;
    std::uint64_t seed = 0;
    // Auto: dense LU for 1D n <= 512, Krylov otherwise.
    SolverChoice solver = SolverChoice::Auto;

    // Exponent of -A inside the diffusivity: the override if set, else
    // 1 - epsilon (Integrated) or (1 - epsilon) / 2 (Divergence).
    double operator_exponent() const;

    // Throws InvalidArgument on out-of-range values.
    void validate() const;

    // One-line key=value rendering of every field, enough to re-run exactly.
    std::string describe() const;
};

} // namespace nlpm
