#pragma once

// Spectral calculus on uniform grids: orthonormal transforms, eigenvalue
// spectra of the Laplacian for three boundary conditions, and operator
// functions applied by exponentiating eigenvalues.

#include "nlpm/grid.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlpm::spectral {

/// Eigenvalues of -A (A the Laplacian on [0,1]^dim) for one grid size and
/// boundary condition, stored in the coefficient order of the matching transform.
///
/// Periodic coefficients use the real-Fourier halfcomplex layout: index k holds
/// cos(2 pi k x) for k <= n/2 and index n-k holds sin(2 pi k x). Read as FFT
/// order the index k maps to frequency k for k <= n/2 and k-n otherwise, and the
/// eigenvalue is 4 pi^2 k^2. Dirichlet index k is the sine mode k+1 with
/// eigenvalue pi^2 (k+1)^2; Neumann index k is the cosine mode k with pi^2 k^2.
class Spectrum {
public:
    Spectrum(std::size_t n, BoundaryCondition bc, int dim);

    std::size_t n() const noexcept { return n_; }
    BoundaryCondition bc() const noexcept { return bc_; }
    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return eigenvalues_.size(); }

    // n^dim values; 2D entry i*n+j is the sum of the 1D eigenvalues i and j.
    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    std::span<const double> axis_eigenvalues() const noexcept { return axis_eigenvalues_; }

    // Signed mode number of 1D coefficient index k (FFT order for Periodic).
    long mode(std::size_t k) const;

    bool matches(const GridField& f) const noexcept
    {
        return f.n() == n_ && f.dim() == dim_ && f.bc() == bc_;
    }

private:
    std::size_t n_;
    BoundaryCondition bc_;
    int dim_;
    std::vector<double> axis_eigenvalues_;
    std::vector<double> eigenvalues_;
};

Spectrum build_spectrum(std::size_t n, BoundaryCondition bc, int dim = 1);

// Unitary transforms: the coefficient array has the same 2-norm as the samples.
std::vector<double> forward_transform(const GridField& f);
GridField inverse_transform(std::span<const double> coefficients, BoundaryCondition bc, std::size_t n, int dim);

// F^-1 m(Lambda) F f for an arbitrary eigenvalue multiplier m.
GridField apply_spectral_multiplier(const GridField& f, const Spectrum& s,
                                    const std::function<double(double)>& multiplier);

// (-A)^gamma f with 0^0 = 1, so gamma = 0 is the identity.
GridField apply_operator_power(const GridField& f, double gamma, const Spectrum& s);

// A f; the spectrum of A is non-positive.
GridField apply_laplacian(const GridField& f, const Spectrum& s);

/// First derivative along each axis, computed in the transform basis.
///
/// The derivative of a Periodic field stays in the Fourier basis (the Nyquist
/// mode has no derivative). A Neumann field differentiates into the sine basis
/// on the same midpoint nodes, a Dirichlet field into cosines evaluated at the
/// interior nodes. Returned fields carry the input's grid and tag.
std::vector<GridField> spectral_gradient(const GridField& f, const Spectrum& s);

// Discrete adjoint G^T of spectral_gradient, summed over the supplied axis components.
GridField gradient_adjoint(std::span<const GridField> components, const Spectrum& s);

// Squared derivative symbol of every coefficient, summed over axes, so that
// sum_k weight_k c_k^2 is the gradient energy of the interpolant. On Dirichlet
// grids this is the trapezoid sum including x = 0 and x = 1, not ||G f||^2.
std::vector<double> gradient_energy_weights(const Spectrum& s);

} // namespace nlpm::spectral
