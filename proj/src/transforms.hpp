#pragma once

// Orthonormal 1D real-to-real transforms backed by FFTW, plus line-wise
// application along one axis of a row-major 2D array.

#include <cstddef>
#include <span>

namespace nlpm::detail {

enum class Basis {
    Fourier,    // real Fourier, halfcomplex order: cos 0..n/2, then sin n/2-1..1
    SineI,      // sin(pi k x), k=1..n on x=j/(n+1)
    CosineII,   // cos(pi k x), k=0..n-1 on x=(j+1/2)/n
    SineII,     // sin(pi k x), k=1..n on x=(j+1/2)/n
    CosineEval, // cos(pi k x), k=1..n on x=j/(n+1); not orthogonal, symmetric
};

// Analysis (coefficients from samples). For CosineEval this is the transpose of synthesis.
void forward_1d(Basis basis, std::span<const double> in, std::span<double> out);
// Synthesis (samples from coefficients).
void inverse_1d(Basis basis, std::span<const double> in, std::span<double> out);

enum class Direction { Forward, Inverse };

// Applies the 1D transform to every line of a dim-dimensional array along `axis`, in place.
void transform_axis(std::span<double> data, std::size_t n, int dim, int axis, Basis basis, Direction dir);

} // namespace nlpm::detail
