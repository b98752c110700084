#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlpm {

// Periodic pairs with the real Fourier transform, Dirichlet with DST-I,
// Neumann with DCT-II.
enum class BoundaryCondition { Periodic, Dirichlet, Neumann };

std::string_view to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(std::string_view name);

// Node coordinate j on [0,1] for the given boundary condition:
//   Periodic  j/n, Dirichlet (j+1)/(n+1), Neumann (j+1/2)/n.
double grid_node(BoundaryCondition bc, std::size_t n, std::size_t j);

// Quadrature weight of one node (cell measure along one axis).
double cell_measure(BoundaryCondition bc, std::size_t n);

bool is_power_of_two(std::size_t n);

// Sampled function on a uniform 1D or 2D grid over [0,1]^dim. 2D values are
// row-major: index = i*n + j with j running along axis 0 (x) and i along axis 1 (y).
class GridField {
public:
    GridField() = default;
    GridField(std::size_t n, int dim, BoundaryCondition bc);
    GridField(std::size_t n, int dim, BoundaryCondition bc, std::vector<double> values);

    static GridField sample(std::size_t n, BoundaryCondition bc, const std::function<double(double)>& f);
    static GridField sample(std::size_t n, BoundaryCondition bc,
                            const std::function<double(double, double)>& f);
    static GridField constant(std::size_t n, int dim, BoundaryCondition bc, double value);

    std::size_t n() const noexcept { return n_; }
    int dim() const noexcept { return dim_; }
    BoundaryCondition bc() const noexcept { return bc_; }
    std::size_t size() const noexcept { return values_.size(); }

    double node(std::size_t j) const { return grid_node(bc_, n_, j); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    const std::vector<double>& data() const noexcept { return values_; }

    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double& at(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

    bool same_shape(const GridField& other) const noexcept {
        return n_ == other.n_ && dim_ == other.dim_ && bc_ == other.bc_;
    }

    double max_abs() const noexcept;
    double mean() const noexcept;

    GridField& operator+=(const GridField& other);
    GridField& operator-=(const GridField& other);
    GridField& operator*=(double s);

private:
    std::size_t n_ = 0;
    int dim_ = 1;
    BoundaryCondition bc_ = BoundaryCondition::Periodic;
    std::vector<double> values_;
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double s, GridField a);

double max_abs_difference(const GridField& a, const GridField& b);

} // namespace nlpm
