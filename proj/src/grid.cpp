#include "nlpm/grid.hpp"

#include "nlpm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlpm {

std::string_view to_string(BoundaryCondition bc)
{
    switch (bc) {
    case BoundaryCondition::Periodic: return "periodic";
    case BoundaryCondition::Dirichlet: return "dirichlet";
    case BoundaryCondition::Neumann: return "neumann";
    }
    return "unknown";
}

BoundaryCondition parse_boundary_condition(std::string_view name)
{
    if (name == "periodic") return BoundaryCondition::Periodic;
    if (name == "dirichlet") return BoundaryCondition::Dirichlet;
    if (name == "neumann") return BoundaryCondition::Neumann;
    throw InvalidArgument("unknown boundary condition '" + std::string(name) + "'");
}

double grid_node(BoundaryCondition bc, std::size_t n, std::size_t j)
{
    const auto nd = static_cast<double>(n);
    const auto jd = static_cast<double>(j);
    switch (bc) {
    case BoundaryCondition::Periodic: return jd / nd;
    case BoundaryCondition::Dirichlet: return (jd + 1.0) / (nd + 1.0);
    case BoundaryCondition::Neumann: return (jd + 0.5) / nd;
    }
    return 0.0;
}

double cell_measure(BoundaryCondition bc, std::size_t n)
{
    return bc == BoundaryCondition::Dirichlet ? 1.0 / static_cast<double>(n + 1)
                                              : 1.0 / static_cast<double>(n);
}

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

GridField::GridField(std::size_t n, int dim, BoundaryCondition bc)
    : GridField(n, dim, bc, std::vector<double>(dim == 2 ? n * n : n, 0.0))
{
}

GridField::GridField(std::size_t n, int dim, BoundaryCondition bc, std::vector<double> values)
    : n_(n), dim_(dim), bc_(bc), values_(std::move(values))
{
    if (dim != 1 && dim != 2) throw InvalidSize("dimension must be 1 or 2, got " + std::to_string(dim));
    const std::size_t expected = dim == 2 ? n * n : n;
    if (values_.size() != expected) {
        throw InvalidSize("field has " + std::to_string(values_.size()) + " values, expected " +
                          std::to_string(expected));
    }
}

GridField GridField::sample(std::size_t n, BoundaryCondition bc, const std::function<double(double)>& f)
{
    GridField out(n, 1, bc);
    for (std::size_t j = 0; j < n; ++j) out[j] = f(grid_node(bc, n, j));
    return out;
}

GridField GridField::sample(std::size_t n, BoundaryCondition bc,
                            const std::function<double(double, double)>& f)
{
    GridField out(n, 2, bc);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = grid_node(bc, n, i);
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = f(grid_node(bc, n, j), y);
    }
    return out;
}

GridField GridField::constant(std::size_t n, int dim, BoundaryCondition bc, double value)
{
    GridField out(n, dim, bc);
    std::fill(out.values_.begin(), out.values_.end(), value);
    return out;
}

double GridField::max_abs() const noexcept
{
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridField::mean() const noexcept
{
    if (values_.empty()) return 0.0;
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

namespace {
void require_same_shape(const GridField& a, const GridField& b)
{
    if (!a.same_shape(b)) throw InvalidArgument("grid fields differ in size, dimension or boundary condition");
}
} // namespace

GridField& GridField::operator+=(const GridField& other)
{
    require_same_shape(*this, other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

GridField& GridField::operator-=(const GridField& other)
{
    require_same_shape(*this, other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

GridField& GridField::operator*=(double s)
{
    for (double& v : values_) v *= s;
    return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double s, GridField a) { return a *= s; }

double max_abs_difference(const GridField& a, const GridField& b)
{
    require_same_shape(a, b);
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace nlpm
