#pragma once

// Conservation bookkeeping, norms, the kink-singularity fit and image metrics.

#include "nlpm/flow_config.hpp"
#include "nlpm/grid.hpp"
#include "nlpm/spectral.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace nlpm::diagnostics {

using spectral::Spectrum;

/// One row of the conservation ledger.
///
/// Integrated runs report quantities of v = u_x: mean_of_gradient is the mean
/// of v, h1_seminorm_sq is int v^2, and dissipation_accum is
/// 2 int_0^t int (A u)^2 a(u) dx dtau, so that h1 + dissipation stays equal to
/// its initial value. Divergence runs track the L2 identity instead:
/// mean_of_gradient holds the mean of the state and dissipation_accum is
/// 2 int_0^t int a |grad u|^2, balanced against l2_sq.
struct DiagnosticsRecord {
    std::size_t step = 0;
    double time = 0.0;
    double mean_of_gradient = 0.0;
    double h1_seminorm_sq = 0.0;
    double l2_sq = 0.0;
    double dissipation_accum = 0.0;
    double conservation_residual = 0.0;
    double total_variation = 0.0;
    double max_gradient = 0.0;
};

double field_mean(const GridField& f, const Spectrum& s);
// L2 norm over [0,1]^dim computed from transform coefficients.
double field_l2(const GridField& f, const Spectrum& s);
double h1_seminorm_sq(const GridField& f, const Spectrum& s);

// Incremental ledger: feed states in time order, one per step.
class ConservationLedger {
public:
    ConservationLedger(const FlowConfig& cfg, const Spectrum& s);

    // States must arrive in step order. The integrand at step k uses the
    // diffusivity of state k-1, the one the lagged step actually applied, so
    // the ledger audits the discrete scheme rather than a re-linearization.
    const DiagnosticsRecord& add(const GridField& state);
    // Uses the supplied diffusivity field instead.
    const DiagnosticsRecord& add(const GridField& state, const GridField& coefficient);

    const std::vector<DiagnosticsRecord>& records() const noexcept { return records_; }

private:
    FlowConfig cfg_;
    Spectrum spectrum_;
    std::vector<DiagnosticsRecord> records_;
    GridField lagged_;
    double previous_integrand_ = 0.0;
    double reference_ = 0.0;
};

std::vector<DiagnosticsRecord> conservation_ledger(std::span<const GridField> trajectory, const FlowConfig& cfg,
                                                   const Spectrum& s);

struct KernelFit {
    double slope = 0.0;            // fitted exponent of |x - x_kink|
    double expected_slope = 0.0;   // 2 eps - 1
    double prefactor = 0.0;        // fitted magnitude of the singular term
    double unit_kink_constant = 0.0; // (2/pi) Gamma(1-2eps) sin(pi eps), the magnitude for u = |x|
    double normalized_constant = 0.0; // sqrt(2/pi) Gamma(1-2eps) sin(pi eps)
    std::size_t samples = 0;
};

/// Fits the singularity of (-A)^(1-eps) applied to the periodic hat |x - 1/2|.
///
/// The response behaves like C + c |x - 1/2|^p near the kink. The fit
/// regresses log |g(d) - g(2d)| on log d over node distances d in [8/n, 1/16],
/// which removes the regular part C; p is the slope and c follows from the
/// intercept. Requires eps in (0, 1/2) and a power-of-two n >= 1024.
KernelFit kernel_slope_fit(double eps, std::size_t n);

// Sum of absolute first differences along every axis (no wrap-around).
double total_variation(const GridField& f);
double total_variation(std::span<const double> v);

inline constexpr double psnr_cap_db = 300.0;

// 10 log10(peak^2 / mse), capped at psnr_cap_db for identical fields.
double psnr(const GridField& a, const GridField& b, double peak = 1.0);

// Strict interior extrema of a sequence after discarding `trim` entries at each end.
std::size_t count_local_extrema(std::span<const double> v, std::size_t trim);

// Amplitude of the frequency-k component of a 1D periodic field: sqrt(a^2 + b^2)
// for the continuum expansion a cos(2 pi k x) + b sin(2 pi k x).
double fourier_mode_amplitude(const GridField& f, std::size_t k);

} // namespace nlpm::diagnostics
