#pragma once

// The nonlocal diffusivity, the lagged semi-implicit Euler step in both
// formulations, image <-> antiderivative conversions and the time loop.

#include "nlpm/diagnostics.hpp"
#include "nlpm/errors.hpp"
#include "nlpm/flow_config.hpp"
#include "nlpm/grid.hpp"
#include "nlpm/linsolve.hpp"
#include "nlpm/spectral.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace nlpm::flow {

using linsolve::SolveReport;
using spectral::Spectrum;

// a = 1 / (1 + g^2) with g = (-A)^gamma u; every entry lies in (0, 1].
GridField diffusivity(const GridField& u, double gamma, const Spectrum& s);

// L v = -G^T diag(a) G v with G the spectral gradient; symmetric and non-positive.
GridField divergence_operator(const GridField& v, const GridField& a, const Spectrum& s);

struct StepResult {
    GridField u;
    SolveReport report;
};

// Solves (I - h_t diag(a) A) u' = u. `a` must come from the same u.
StepResult step_integrated(const GridField& u, const GridField& a, const FlowConfig& cfg, const Spectrum& s);

// Solves (I - h_t L) u' = u with L the divergence operator for `a`.
StepResult step_divergence(const GridField& u, const GridField& a, const FlowConfig& cfg, const Spectrum& s);

// Diffusivity from cfg.operator_exponent() followed by the step for cfg.formulation.
StepResult step(const GridField& u, const FlowConfig& cfg, const Spectrum& s);

using StepObserver = std::function<void(std::size_t step, const GridField& state, const SolveReport& report)>;

struct FlowResult {
    GridField state;
    std::vector<diagnostics::DiagnosticsRecord> records; // one per step, starting with step 0
};

// A step failed; holds everything computed before the failing step.
class FlowError : public Error {
public:
    FlowError(const std::string& what, std::size_t failed_step, FlowResult partial)
        : Error(what), failed_step_(failed_step), partial_(std::move(partial)) {}
    std::size_t failed_step() const noexcept { return failed_step_; }
    const FlowResult& partial() const noexcept { return partial_; }

private:
    std::size_t failed_step_;
    FlowResult partial_;
};

FlowResult run_flow(const GridField& u0, const FlowConfig& cfg, const Spectrum& s, const StepObserver& observer = {});

// w(x) = int_0^x img - x * int_0^1 img by cumulative trapezoidal quadrature, so
// w vanishes at both ends of [0,1]. 1D only.
GridField integrate_image(const GridField& img);

// Spectral derivative of w plus the subtracted mean. 1D only.
GridField differentiate_state(const GridField& w, double mean);
GridField differentiate_state(const GridField& w, double mean, const Spectrum& s);

} // namespace nlpm::flow
