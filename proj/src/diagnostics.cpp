#include "nlpm/diagnostics.hpp"

#include "nlpm/errors.hpp"
#include "nlpm/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nlpm::diagnostics {

namespace {

double node_weight(const Spectrum& s)
{
    const double h = cell_measure(s.bc(), s.n());
    return s.dim() == 2 ? h * h : h;
}

void require_match(const GridField& f, const Spectrum& s)
{
    if (!s.matches(f)) throw InvalidArgument("field does not match the spectrum");
}

} // namespace

double field_mean(const GridField& f, const Spectrum& s)
{
    require_match(f, s);
    return f.mean();
}

double field_l2(const GridField& f, const Spectrum& s)
{
    require_match(f, s);
    double sum = 0.0;
    for (double c : spectral::forward_transform(f)) sum += c * c;
    return std::sqrt(node_weight(s) * sum);
}

double h1_seminorm_sq(const GridField& f, const Spectrum& s)
{
    require_match(f, s);
    const auto c = spectral::forward_transform(f);
    const auto w = spectral::gradient_energy_weights(s);
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) sum += w[k] * c[k] * c[k];
    return node_weight(s) * sum;
}

ConservationLedger::ConservationLedger(const FlowConfig& cfg, const Spectrum& s) : cfg_(cfg), spectrum_(s) {}

const DiagnosticsRecord& ConservationLedger::add(const GridField& state)
{
    GridField current = flow::diffusivity(state, cfg_.operator_exponent(), spectrum_);
    // The step that produced `state` used the diffusivity of the previous state.
    GridField used = records_.empty() ? current : std::move(lagged_);
    lagged_ = std::move(current);
    return add(state, used);
}

const DiagnosticsRecord& ConservationLedger::add(const GridField& state, const GridField& coefficient)
{
    require_match(state, spectrum_);
    require_match(coefficient, spectrum_);
    const double weight = node_weight(spectrum_);

    DiagnosticsRecord rec;
    rec.step = records_.size();
    rec.time = static_cast<double>(rec.step) * cfg_.h_t;
    rec.h1_seminorm_sq = h1_seminorm_sq(state, spectrum_);
    const double l2 = field_l2(state, spectrum_);
    rec.l2_sq = l2 * l2;
    rec.total_variation = total_variation(state);

    const auto grad = spectral::spectral_gradient(state, spectrum_);
    std::vector<double> grad_sq(state.size(), 0.0);
    for (const auto& g : grad)
        for (std::size_t k = 0; k < g.size(); ++k) grad_sq[k] += g[k] * g[k];
    rec.max_gradient = std::sqrt(*std::max_element(grad_sq.begin(), grad_sq.end()));

    double integrand = 0.0;
    if (cfg_.formulation == Formulation::Integrated) {
        double mean = 0.0;
        for (const auto& g : grad) mean += g.mean();
        rec.mean_of_gradient = mean / static_cast<double>(grad.size());
        const GridField lap = spectral::apply_laplacian(state, spectrum_);
        for (std::size_t k = 0; k < lap.size(); ++k) integrand += lap[k] * lap[k] * coefficient[k];
    } else {
        rec.mean_of_gradient = state.mean();
        for (std::size_t k = 0; k < grad_sq.size(); ++k) integrand += coefficient[k] * grad_sq[k];
    }
    integrand *= weight;

    if (records_.empty()) {
        reference_ = cfg_.formulation == Formulation::Integrated ? rec.h1_seminorm_sq : rec.l2_sq;
    } else {
        const DiagnosticsRecord& prev = records_.back();
        // 2 * trapezoid(I_prev, I_now) over the step
        rec.dissipation_accum = prev.dissipation_accum + (rec.time - prev.time) * (previous_integrand_ + integrand);
    }
    previous_integrand_ = integrand;

    const double tracked = cfg_.formulation == Formulation::Integrated ? rec.h1_seminorm_sq : rec.l2_sq;
    rec.conservation_residual =
        reference_ > 0.0 ? std::abs(tracked + rec.dissipation_accum - reference_) / reference_ : 0.0;

    records_.push_back(rec);
    return records_.back();
}

std::vector<DiagnosticsRecord> conservation_ledger(std::span<const GridField> trajectory, const FlowConfig& cfg,
                                                   const Spectrum& s)
{
    if (trajectory.empty()) throw InvalidArgument("conservation ledger needs a non-empty trajectory");
    ConservationLedger ledger(cfg, s);
    for (const auto& state : trajectory) ledger.add(state);
    return ledger.records();
}

KernelFit kernel_slope_fit(double eps, std::size_t n)
{
    if (!(eps > 0.0 && eps < 0.5)) throw DomainError("kernel law holds only for epsilon in (0, 1/2)");
    if (n < 1024 || !is_power_of_two(n)) throw InvalidSize("kernel fit needs a power-of-two n >= 1024");

    const auto s = spectral::build_spectrum(n, BoundaryCondition::Periodic, 1);
    const GridField hat = GridField::sample(n, BoundaryCondition::Periodic, [](double x) { return std::abs(x - 0.5); });
    const GridField g = spectral::apply_operator_power(hat, 1.0 - eps, s);

    // Node offsets d from the kink at n/2 with 8/n <= d and 2d <= 1/16.
    const std::size_t kink = n / 2;
    const std::size_t first = 8;
    const std::size_t last = n / 32;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (std::size_t d = first; d <= last; ++d) {
        const double diff = std::abs(g[kink + d] - g[kink + 2 * d]);
        const double x = std::log(static_cast<double>(d) / static_cast<double>(n));
        const double y = std::log(diff);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    const double m = static_cast<double>(count);
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / m;

    KernelFit fit;
    fit.slope = slope;
    fit.expected_slope = 2.0 * eps - 1.0;
    fit.prefactor = std::exp(intercept) / std::abs(1.0 - std::pow(2.0, slope));
    const double core = std::tgamma(1.0 - 2.0 * eps) * std::sin(std::numbers::pi * eps);
    fit.unit_kink_constant = 2.0 / std::numbers::pi * core;
    fit.normalized_constant = std::sqrt(2.0 / std::numbers::pi) * core;
    fit.samples = count;
    return fit;
}

double total_variation(std::span<const double> v)
{
    double tv = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) tv += std::abs(v[k] - v[k - 1]);
    return tv;
}

double total_variation(const GridField& f)
{
    if (f.dim() == 1) return total_variation(f.values());
    const std::size_t n = f.n();
    double tv = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j + 1 < n) tv += std::abs(f.at(i, j + 1) - f.at(i, j));
            if (i + 1 < n) tv += std::abs(f.at(i + 1, j) - f.at(i, j));
        }
    return tv;
}

double psnr(const GridField& a, const GridField& b, double peak)
{
    if (!(peak > 0.0)) throw InvalidArgument("PSNR peak must be positive");
    if (a.n() != b.n() || a.dim() != b.dim()) throw InvalidArgument("PSNR needs fields of equal shape");
    double mse = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) mse += (a[k] - b[k]) * (a[k] - b[k]);
    mse /= static_cast<double>(a.size());
    if (mse == 0.0) return psnr_cap_db;
    return std::min(psnr_cap_db, 10.0 * std::log10(peak * peak / mse));
}

std::size_t count_local_extrema(std::span<const double> v, std::size_t trim)
{
    if (v.size() < 2 * trim + 3) return 0;
    std::size_t count = 0;
    for (std::size_t k = trim + 1; k + 1 < v.size() - trim; ++k) {
        const double left = v[k] - v[k - 1];
        const double right = v[k + 1] - v[k];
        if ((left > 0.0 && right < 0.0) || (left < 0.0 && right > 0.0)) ++count;
    }
    return count;
}

double fourier_mode_amplitude(const GridField& f, std::size_t k)
{
    if (f.dim() != 1 || f.bc() != BoundaryCondition::Periodic) {
        throw InvalidArgument("mode amplitude needs a 1D periodic field");
    }
    const std::size_t n = f.n();
    if (k > n / 2) throw InvalidArgument("frequency above Nyquist");
    const auto c = spectral::forward_transform(f);
    const double nd = static_cast<double>(n);
    if (k == 0 || k == n / 2) return std::abs(c[k]) / std::sqrt(nd);
    return std::sqrt(2.0 / nd) * std::hypot(c[k], c[n - k]);
}

} // namespace nlpm::diagnostics
