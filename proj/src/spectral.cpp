#include "nlpm/spectral.hpp"

#include "nlpm/errors.hpp"
#include "transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nlpm::spectral {

using detail::Basis;
using detail::Direction;

namespace {

constexpr double pi = std::numbers::pi;

void validate_size(std::size_t n, int dim)
{
    if (n < 4 || !is_power_of_two(n)) {
        throw InvalidSize("grid size must be a power of two >= 4, got " + std::to_string(n));
    }
    if (dim != 1 && dim != 2) throw InvalidArgument("dimension must be 1 or 2, got " + std::to_string(dim));
}

void require_match(const GridField& f, const Spectrum& s)
{
    if (!s.matches(f)) {
        throw InvalidArgument("field (n=" + std::to_string(f.n()) + ", dim=" + std::to_string(f.dim()) + ", " +
                              std::string(to_string(f.bc())) + ") does not match spectrum (n=" +
                              std::to_string(s.n()) + ", dim=" + std::to_string(s.dim()) + ", " +
                              std::string(to_string(s.bc())) + ")");
    }
}

Basis field_basis(BoundaryCondition bc)
{
    switch (bc) {
    case BoundaryCondition::Periodic: return Basis::Fourier;
    case BoundaryCondition::Dirichlet: return Basis::SineI;
    case BoundaryCondition::Neumann: return Basis::CosineII;
    }
    return Basis::Fourier;
}

Basis derivative_basis(BoundaryCondition bc)
{
    switch (bc) {
    case BoundaryCondition::Periodic: return Basis::Fourier;
    case BoundaryCondition::Dirichlet: return Basis::CosineEval;
    case BoundaryCondition::Neumann: return Basis::SineII;
    }
    return Basis::Fourier;
}

// Maps field coefficients to derivative coefficients (or back, when transposed).
void derivative_symbol(BoundaryCondition bc, std::span<const double> in, std::span<double> out, bool transpose)
{
    const std::size_t n = in.size();
    std::fill(out.begin(), out.end(), 0.0);
    switch (bc) {
    case BoundaryCondition::Periodic: {
        // d/dx (a cos + b sin) = 2 pi k (b cos - a sin); the transpose is the negation.
        const double sign = transpose ? -1.0 : 1.0;
        for (std::size_t k = 1; k < n / 2; ++k) {
            const double w = 2.0 * pi * static_cast<double>(k);
            out[k] = sign * w * in[n - k];
            out[n - k] = -sign * w * in[k];
        }
        break;
    }
    case BoundaryCondition::Neumann:
        // cos mode k -> -pi k sin mode k (stored at k-1)
        for (std::size_t k = 1; k < n; ++k) {
            const double w = -pi * static_cast<double>(k);
            if (transpose) out[k] = w * in[k - 1];
            else out[k - 1] = w * in[k];
        }
        break;
    case BoundaryCondition::Dirichlet:
        for (std::size_t k = 0; k < n; ++k) out[k] = pi * static_cast<double>(k + 1) * in[k];
        break;
    }
}

double squared_symbol(BoundaryCondition bc, std::size_t n, std::size_t k)
{
    switch (bc) {
    case BoundaryCondition::Periodic: {
        if (k == 0 || k == n / 2) return 0.0;
        const double f = static_cast<double>(k < n / 2 ? k : n - k);
        return 4.0 * pi * pi * f * f;
    }
    case BoundaryCondition::Dirichlet: {
        const double f = static_cast<double>(k + 1);
        return pi * pi * f * f;
    }
    case BoundaryCondition::Neumann: {
        const double f = static_cast<double>(k);
        return pi * pi * f * f;
    }
    }
    return 0.0;
}

template <typename LineOp>
void map_lines(std::span<double> data, std::size_t n, int dim, int axis, LineOp&& op)
{
    std::vector<double> line(n), result(n);
    const std::size_t lines = dim == 2 ? n : 1;
    const bool strided = dim == 2 && axis == 1;
    const std::size_t stride = strided ? n : 1;
    for (std::size_t l = 0; l < lines; ++l) {
        const std::size_t offset = strided ? l : l * n;
        for (std::size_t k = 0; k < n; ++k) line[k] = data[offset + k * stride];
        op(std::span<const double>(line), std::span<double>(result));
        for (std::size_t k = 0; k < n; ++k) data[offset + k * stride] = result[k];
    }
}

void transform_all_axes(std::span<double> data, std::size_t n, int dim, Basis basis, Direction dir)
{
    for (int axis = 0; axis < dim; ++axis) detail::transform_axis(data, n, dim, axis, basis, dir);
}

} // namespace

Spectrum::Spectrum(std::size_t n, BoundaryCondition bc, int dim) : n_(n), bc_(bc), dim_(dim)
{
    validate_size(n, dim);
    axis_eigenvalues_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double m = static_cast<double>(mode(k));
        const double base = bc == BoundaryCondition::Periodic ? 2.0 * pi : pi;
        axis_eigenvalues_[k] = base * base * m * m;
    }
    if (dim == 1) {
        eigenvalues_ = axis_eigenvalues_;
    } else {
        eigenvalues_.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) eigenvalues_[i * n + j] = axis_eigenvalues_[i] + axis_eigenvalues_[j];
    }
}

long Spectrum::mode(std::size_t k) const
{
    if (k >= n_) throw InvalidArgument("coefficient index out of range");
    const auto kl = static_cast<long>(k);
    switch (bc_) {
    case BoundaryCondition::Periodic: return k <= n_ / 2 ? kl : kl - static_cast<long>(n_);
    case BoundaryCondition::Dirichlet: return kl + 1;
    case BoundaryCondition::Neumann: return kl;
    }
    return kl;
}

Spectrum build_spectrum(std::size_t n, BoundaryCondition bc, int dim) { return Spectrum(n, bc, dim); }

std::vector<double> forward_transform(const GridField& f)
{
    validate_size(f.n(), f.dim());
    std::vector<double> c(f.values().begin(), f.values().end());
    transform_all_axes(c, f.n(), f.dim(), field_basis(f.bc()), Direction::Forward);
    return c;
}

GridField inverse_transform(std::span<const double> coefficients, BoundaryCondition bc, std::size_t n, int dim)
{
    validate_size(n, dim);
    const std::size_t expected = dim == 2 ? n * n : n;
    if (coefficients.size() != expected) {
        throw InvalidSize("coefficient array has " + std::to_string(coefficients.size()) + " entries, expected " +
                          std::to_string(expected));
    }
    std::vector<double> v(coefficients.begin(), coefficients.end());
    transform_all_axes(v, n, dim, field_basis(bc), Direction::Inverse);
    return GridField(n, dim, bc, std::move(v));
}

GridField apply_spectral_multiplier(const GridField& f, const Spectrum& s,
                                    const std::function<double(double)>& multiplier)
{
    require_match(f, s);
    auto c = forward_transform(f);
    const auto lambda = s.eigenvalues();
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= multiplier(lambda[k]);
    return inverse_transform(c, f.bc(), f.n(), f.dim());
}

GridField apply_operator_power(const GridField& f, double gamma, const Spectrum& s)
{
    if (!(gamma >= 0.0)) throw InvalidArgument("operator exponent must be >= 0");
    if (gamma == 0.0) {
        require_match(f, s);
        return f;
    }
    if (gamma == 1.0) return apply_spectral_multiplier(f, s, [](double lambda) { return lambda; });
    return apply_spectral_multiplier(f, s, [gamma](double lambda) {
        return lambda == 0.0 ? 0.0 : std::pow(lambda, gamma);
    });
}

GridField apply_laplacian(const GridField& f, const Spectrum& s)
{
    return apply_spectral_multiplier(f, s, [](double lambda) { return -lambda; });
}

std::vector<GridField> spectral_gradient(const GridField& f, const Spectrum& s)
{
    require_match(f, s);
    const Basis from = field_basis(f.bc());
    const Basis to = derivative_basis(f.bc());
    std::vector<GridField> out;
    out.reserve(static_cast<std::size_t>(f.dim()));
    for (int axis = 0; axis < f.dim(); ++axis) {
        GridField d = f;
        std::vector<double> coeffs(f.n()), dcoeffs(f.n());
        map_lines(d.values(), f.n(), f.dim(), axis, [&](std::span<const double> in, std::span<double> result) {
            detail::forward_1d(from, in, coeffs);
            derivative_symbol(f.bc(), coeffs, dcoeffs, false);
            detail::inverse_1d(to, dcoeffs, result);
        });
        out.push_back(std::move(d));
    }
    return out;
}

GridField gradient_adjoint(std::span<const GridField> components, const Spectrum& s)
{
    if (components.size() != static_cast<std::size_t>(s.dim())) {
        throw InvalidArgument("gradient adjoint needs one component per axis");
    }
    const Basis from = derivative_basis(s.bc());
    const Basis to = field_basis(s.bc());
    GridField total(s.n(), s.dim(), s.bc());
    for (int axis = 0; axis < s.dim(); ++axis) {
        const GridField& q = components[static_cast<std::size_t>(axis)];
        require_match(q, s);
        GridField p = q;
        std::vector<double> coeffs(s.n()), tcoeffs(s.n());
        map_lines(p.values(), s.n(), s.dim(), axis, [&](std::span<const double> in, std::span<double> result) {
            detail::forward_1d(from, in, coeffs);
            derivative_symbol(s.bc(), coeffs, tcoeffs, true);
            detail::inverse_1d(to, tcoeffs, result);
        });
        total += p;
    }
    return total;
}

std::vector<double> gradient_energy_weights(const Spectrum& s)
{
    const std::size_t n = s.n();
    std::vector<double> axis(n);
    for (std::size_t k = 0; k < n; ++k) axis[k] = squared_symbol(s.bc(), n, k);
    if (s.dim() == 1) return axis;
    std::vector<double> w(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i * n + j] = axis[i] + axis[j];
    return w;
}

} // namespace nlpm::spectral
