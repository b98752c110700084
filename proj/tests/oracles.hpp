#pragma once

// Dense reference operators assembled from closed-form eigenfunctions. Nothing
// here calls into the library's transforms, so agreement with the spectral
// code is a genuine cross-check.

#include "nlpm/grid.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlpm::BoundaryCondition;

inline constexpr double pi = std::numbers::pi;

inline double node(BoundaryCondition bc, std::size_t n, std::size_t j)
{
    const double nd = static_cast<double>(n), jd = static_cast<double>(j);
    switch (bc) {
    case BoundaryCondition::Periodic: return jd / nd;
    case BoundaryCondition::Dirichlet: return (jd + 1.0) / (nd + 1.0);
    case BoundaryCondition::Neumann: return (jd + 0.5) / nd;
    }
    return 0.0;
}

// One continuum eigenfunction of the Laplacian: value, derivative and the
// eigenvalue of -A.
struct Mode {
    double lambda;
    double (*value)(double k, double x);
    double (*slope)(double k, double x);
    double k;
};

inline double cos2(double k, double x) { return std::cos(2 * pi * k * x); }
inline double cos2d(double k, double x) { return -2 * pi * k * std::sin(2 * pi * k * x); }
inline double sin2(double k, double x) { return std::sin(2 * pi * k * x); }
inline double sin2d(double k, double x) { return 2 * pi * k * std::cos(2 * pi * k * x); }
inline double cos1(double k, double x) { return std::cos(pi * k * x); }
inline double cos1d(double k, double x) { return -pi * k * std::sin(pi * k * x); }
inline double sin1(double k, double x) { return std::sin(pi * k * x); }
inline double sin1d(double k, double x) { return pi * k * std::cos(pi * k * x); }

// The n modes the grid resolves, in no particular order.
inline std::vector<Mode> modes(BoundaryCondition bc, std::size_t n)
{
    std::vector<Mode> out;
    switch (bc) {
    case BoundaryCondition::Periodic:
        for (std::size_t k = 0; k <= n / 2; ++k) {
            const double kd = static_cast<double>(k);
            out.push_back({4 * pi * pi * kd * kd, cos2, cos2d, kd});
            if (k > 0 && k < n / 2) out.push_back({4 * pi * pi * kd * kd, sin2, sin2d, kd});
        }
        break;
    case BoundaryCondition::Dirichlet:
        for (std::size_t k = 1; k <= n; ++k) {
            const double kd = static_cast<double>(k);
            out.push_back({pi * pi * kd * kd, sin1, sin1d, kd});
        }
        break;
    case BoundaryCondition::Neumann:
        for (std::size_t k = 0; k < n; ++k) {
            const double kd = static_cast<double>(k);
            out.push_back({pi * pi * kd * kd, cos1, cos1d, kd});
        }
        break;
    }
    return out;
}

// Columns are the sampled modes normalized to unit Euclidean length; the
// matching eigenvalues go to `lambda`. The resulting matrix is orthogonal.
inline MatrixXd basis(BoundaryCondition bc, std::size_t n, VectorXd* lambda = nullptr)
{
    const auto ms = modes(bc, n);
    MatrixXd phi(n, n);
    if (lambda) lambda->resize(static_cast<Eigen::Index>(n));
    for (std::size_t c = 0; c < ms.size(); ++c) {
        for (std::size_t j = 0; j < n; ++j) phi(j, c) = ms[c].value(ms[c].k, node(bc, n, j));
        phi.col(c).normalize();
        if (lambda) (*lambda)(c) = ms[c].lambda;
    }
    return phi;
}

// Nodal derivative of the trigonometric interpolant through the samples.
// The periodic Nyquist cosine differentiates to sin(pi n x_j) = 0 on the grid.
inline MatrixXd derivative(BoundaryCondition bc, std::size_t n)
{
    const auto ms = modes(bc, n);
    MatrixXd phi(n, n), dphi(n, n);
    for (std::size_t c = 0; c < ms.size(); ++c) {
        double norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = node(bc, n, j);
            phi(j, c) = ms[c].value(ms[c].k, x);
            dphi(j, c) = ms[c].slope(ms[c].k, x);
            norm += phi(j, c) * phi(j, c);
        }
        phi.col(c) /= std::sqrt(norm);
        dphi.col(c) /= std::sqrt(norm);
    }
    return dphi * phi.transpose();
}

// Derivative of the interpolant evaluated on the closed grid with trapezoid
// weights. Dirichlet adds the endpoints x = 0 and x = 1, where the cosine
// derivative modes are orthogonal only once those nodes are included; the
// other grids are already exact under the plain node sum.
struct ClosedDerivative {
    MatrixXd d;
    VectorXd w;
};

inline ClosedDerivative closed_derivative(BoundaryCondition bc, std::size_t n)
{
    if (bc != BoundaryCondition::Dirichlet) return {derivative(bc, n), VectorXd::Ones(static_cast<Eigen::Index>(n))};
    const auto ms = modes(bc, n);
    const auto m = static_cast<Eigen::Index>(n + 2);
    MatrixXd phi(n, n), dphi(m, n);
    for (std::size_t c = 0; c < ms.size(); ++c) {
        double norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            phi(j, c) = ms[c].value(ms[c].k, node(bc, n, j));
            norm += phi(j, c) * phi(j, c);
        }
        for (Eigen::Index j = 0; j < m; ++j) dphi(j, c) = ms[c].slope(ms[c].k, static_cast<double>(j) / (n + 1.0));
        phi.col(c) /= std::sqrt(norm);
        dphi.col(c) /= std::sqrt(norm);
    }
    VectorXd w = VectorXd::Ones(m);
    w(0) = w(m - 1) = 0.5;
    return {dphi * phi.transpose(), w};
}

// sum over axes of the trapezoid sum of the squared derivative, no cell factor
inline double gradient_energy(const nlpm::GridField& f)
{
    const auto [d, w] = closed_derivative(f.bc(), f.n());
    const auto n = static_cast<Eigen::Index>(f.n());
    const auto& v = f.data();
    double total = 0.0;
    if (f.dim() == 1) {
        const VectorXd g = d * Eigen::Map<const VectorXd>(v.data(), n);
        return (w.array() * g.array().square()).sum();
    }
    VectorXd line(n);
    for (int axis = 0; axis < 2; ++axis)
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) line(j) = axis == 0 ? v[static_cast<std::size_t>(i * n + j)] : v[static_cast<std::size_t>(j * n + i)];
            const VectorXd g = d * line;
            total += (w.array() * g.array().square()).sum();
        }
    return total;
}

// (-A)^gamma as a dense matrix, 0^gamma = 0 for gamma > 0 and 1 for gamma = 0.
inline MatrixXd operator_power(BoundaryCondition bc, std::size_t n, double gamma)
{
    VectorXd lambda;
    const MatrixXd phi = basis(bc, n, &lambda);
    VectorXd p(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k)
        p(k) = gamma == 0.0 ? 1.0 : (lambda(k) == 0.0 ? 0.0 : std::pow(lambda(k), gamma));
    return phi * p.asDiagonal() * phi.transpose();
}

inline MatrixXd laplacian(BoundaryCondition bc, std::size_t n) { return -operator_power(bc, n, 1.0); }

// Kronecker lift of a 1D operator acting along x (index j of i*n+j) or y (index i).
inline MatrixXd along_x(const MatrixXd& m)
{
    const Eigen::Index n = m.rows();
    MatrixXd out = MatrixXd::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) out.block(i * n, i * n, n, n) = m;
    return out;
}

inline MatrixXd along_y(const MatrixXd& m)
{
    const Eigen::Index n = m.rows();
    MatrixXd out = MatrixXd::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index r = 0; r < n; ++r) out.block(i * n, r * n, n, n).diagonal().setConstant(m(i, r));
    return out;
}

// -G^T diag(a) G summed over axes, assembled block by block so 2D n = 64
// does not need the Kronecker gradients in memory.
inline MatrixXd divergence(BoundaryCondition bc, std::size_t n, int dim, const std::vector<double>& a)
{
    const MatrixXd g = derivative(bc, n);
    const auto ni = static_cast<Eigen::Index>(n);
    if (dim == 1) {
        const VectorXd av = Eigen::Map<const VectorXd>(a.data(), ni);
        return -g.transpose() * av.asDiagonal() * g;
    }
    MatrixXd out = MatrixXd::Zero(ni * ni, ni * ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
        VectorXd row(ni);
        for (Eigen::Index m = 0; m < ni; ++m) row(m) = a[static_cast<std::size_t>(i * ni + m)];
        out.block(i * ni, i * ni, ni, ni) -= g.transpose() * row.asDiagonal() * g;
    }
    for (Eigen::Index j = 0; j < ni; ++j) {
        VectorXd col(ni);
        for (Eigen::Index m = 0; m < ni; ++m) col(m) = a[static_cast<std::size_t>(m * ni + j)];
        const MatrixXd blk = -g.transpose() * col.asDiagonal() * g;
        for (Eigen::Index r = 0; r < ni; ++r)
            for (Eigen::Index c = 0; c < ni; ++c) out(r * ni + j, c * ni + j) += blk(r, c);
    }
    return out;
}

inline MatrixXd laplacian(BoundaryCondition bc, std::size_t n, int dim)
{
    const MatrixXd l = laplacian(bc, n);
    return dim == 1 ? l : MatrixXd(along_x(l) + along_y(l));
}

inline VectorXd vec(const nlpm::GridField& f)
{
    return Eigen::Map<const VectorXd>(f.data().data(), static_cast<Eigen::Index>(f.size()));
}

inline std::vector<double> vals(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline nlpm::GridField random_field(std::size_t n, int dim, BoundaryCondition bc, std::uint64_t seed,
                                    double lo = -1.0, double hi = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    nlpm::GridField f(n, dim, bc);
    for (double& v : f.values()) v = dist(rng);
    return f;
}

// Diffusivity computed from the dense power matrix.
inline std::vector<double> diffusivity(const nlpm::GridField& u, double gamma)
{
    VectorXd g;
    if (u.dim() == 1) {
        g = operator_power(u.bc(), u.n(), gamma) * vec(u);
    } else {
        // (-A)^gamma of a 2D field through the 2D eigenbasis phi (x) phi
        VectorXd lambda;
        const auto phi = basis(u.bc(), u.n(), &lambda);
        const auto n = static_cast<Eigen::Index>(u.n());
        const MatrixXd U = Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(u.data().data(), n, n);
        MatrixXd C = phi.transpose() * U * phi; // rows: y modes, cols: x modes
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const double l = lambda(i) + lambda(j);
                C(i, j) *= gamma == 0.0 ? 1.0 : (l == 0.0 ? 0.0 : std::pow(l, gamma));
            }
        const MatrixXd G = phi * C * phi.transpose();
        g.resize(n * n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) g(i * n + j) = G(i, j);
    }
    std::vector<double> a(u.size());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = 1.0 / (1.0 + g(static_cast<Eigen::Index>(k)) * g(static_cast<Eigen::Index>(k)));
    return a;
}

// Discrete solution of (I - h diag(a) A) x = u by dense LU.
inline VectorXd integrated_step(const nlpm::GridField& u, const std::vector<double>& a, double h)
{
    const MatrixXd lap = laplacian(u.bc(), u.n(), u.dim());
    const auto m = static_cast<Eigen::Index>(u.size());
    const VectorXd av = Eigen::Map<const VectorXd>(a.data(), m);
    const MatrixXd sys = MatrixXd::Identity(m, m) - h * av.asDiagonal() * lap;
    return sys.partialPivLu().solve(vec(u));
}

// Discrete solution of (I - h L) x = u; the matrix is SPD so Cholesky applies.
inline VectorXd divergence_step(const nlpm::GridField& u, const std::vector<double>& a, double h)
{
    MatrixXd sys = -h * divergence(u.bc(), u.n(), u.dim(), a);
    sys.diagonal().array() += 1.0;
    return sys.llt().solve(vec(u));
}

inline double max_abs(const VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

} // namespace oracle
