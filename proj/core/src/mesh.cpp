#include "relaxrd/mesh.hpp"

#include "relaxrd/error.hpp"

#include <cmath>
#include <string>

namespace relaxrd {

void BoundaryPair::validate() const
{
    const bool lp = left.kind == BoundaryKind::Periodic;
    const bool rp = right.kind == BoundaryKind::Periodic;
    if (lp != rp) {
        throw InvalidArgument("periodic boundary must be set on both sides of an axis");
    }
    for (const auto* bc : {&left, &right}) {
        if (bc->kind == BoundaryKind::Dirichlet && !bc->value) {
            throw InvalidArgument("Dirichlet boundary without a value");
        }
    }
}

std::string to_string(BoundaryKind kind)
{
    switch (kind) {
    case BoundaryKind::Periodic:
        return "periodic";
    case BoundaryKind::Dirichlet:
        return "dirichlet";
    case BoundaryKind::FreeFlow:
        return "free_flow";
    }
    return "unknown";
}

std::vector<double> Grid1D::centers() const
{
    std::vector<double> xs(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j) {
        xs[static_cast<std::size_t>(j - 1)] = center(j);
    }
    return xs;
}

Grid1D make_grid(double a, double b, int m, int ghost)
{
    if (m < 1) {
        throw InvalidArgument("make_grid: cell count must be positive, got " + std::to_string(m));
    }
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidArgument("make_grid: need finite a < b");
    }
    if (ghost < 0) {
        throw InvalidArgument("make_grid: negative ghost count");
    }
    return Grid1D{a, b, m, (b - a) / m, ghost};
}

Grid2D make_grid2d(double ax, double bx, int mx, double ay, double by, int my, int ghost)
{
    return Grid2D{make_grid(ax, bx, mx, ghost), make_grid(ay, by, my, ghost)};
}

Field::Field(const Grid1D& grid, double fill)
    : grid_(grid), values_(static_cast<std::size_t>(grid.total()), fill)
{
}

const BoundaryPair& Field::ghost_bc() const
{
    if (!ghosts_) {
        throw InvalidArgument("field ghost layer is not populated");
    }
    return *ghosts_;
}

Field2D::Field2D(const Grid2D& grid, double fill)
    : grid_(grid), values_(static_cast<std::size_t>(grid.total()), fill)
{
}

std::optional<int> power_of_three(int ratio)
{
    if (ratio < 3) {
        return std::nullopt;
    }
    int k = 0;
    while (ratio % 3 == 0) {
        ratio /= 3;
        ++k;
    }
    if (ratio != 1) {
        return std::nullopt;
    }
    return k;
}

Field restrict_to_coarse(const Field& fine, const Grid1D& coarse_grid)
{
    const Grid1D& fg = fine.grid();
    if (fg.a != coarse_grid.a || fg.b != coarse_grid.b || fg.m % coarse_grid.m != 0) {
        throw InvalidArgument("restrict_to_coarse: grids are not nested");
    }
    const int ratio = fg.m / coarse_grid.m;
    if (!power_of_three(ratio)) {
        throw InvalidArgument("restrict_to_coarse: refinement ratio " + std::to_string(ratio)
                              + " is not a power of three");
    }
    Field out(coarse_grid);
    auto dst = out.interior_mut();
    auto src = fine.interior();
    // Coarse centre j coincides with fine centre ratio*j - (ratio-1)/2.
    for (int j = 1; j <= coarse_grid.m; ++j) {
        const int i = ratio * j - (ratio - 1) / 2;
        dst[static_cast<std::size_t>(j - 1)] = src[static_cast<std::size_t>(i - 1)];
    }
    return out;
}

} // namespace relaxrd
