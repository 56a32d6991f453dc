#pragma once

#include "relaxrd/boundary.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace relaxrd {

/// Uniform cell-centred grid on [a, b] with `m` cells and `ghost` extra
/// cells per side. Cells are numbered 1..m as in x_j = a - h/2 + j h;
/// ghost cells continue the numbering (j <= 0 and j > m).
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    int m = 1;
    double h = 1.0;
    int ghost = 0;

    /// Evaluated through the fraction (2j-1)/(2m), which is the same number on
    /// grids nested by odd factors, so coincident centres are bit-identical.
    double center(int j) const { return a + (b - a) * (static_cast<double>(2 * j - 1) / (2.0 * m)); }
    /// Position of the interface between cells j and j+1.
    double interface(int j) const { return a + (b - a) * (static_cast<double>(j) / m); }
    int total() const { return m + 2 * ghost; }
    /// Storage offset of cell j (1-based, ghosts allowed).
    int offset(int j) const { return j - 1 + ghost; }
    std::vector<double> centers() const;

    bool same_cells(const Grid1D& o) const { return a == o.a && b == o.b && m == o.m; }
};

Grid1D make_grid(double a, double b, int m, int ghost);

/// Tensor product of two axes; fields are stored row-major over (y, x).
struct Grid2D {
    Grid1D x;
    Grid1D y;

    int total() const { return x.total() * y.total(); }
    int interior_size() const { return x.m * y.m; }
};

Grid2D make_grid2d(double ax, double bx, int mx, double ay, double by, int my, int ghost);

/// Point values of one unknown on a 1D grid, ghosts included.
///
/// Tracks whether the ghost layer is current: any mutable access marks it
/// stale, and operators that read ghosts reject stale fields.
class Field {
public:
    Field() = default;
    explicit Field(const Grid1D& grid, double fill = 0.0);

    const Grid1D& grid() const { return grid_; }

    double at(int j) const { return values_[static_cast<std::size_t>(grid_.offset(j))]; }
    void set(int j, double v)
    {
        values_[static_cast<std::size_t>(grid_.offset(j))] = v;
        ghosts_.reset();
    }

    std::span<const double> storage() const { return values_; }
    std::span<double> storage_mut()
    {
        ghosts_.reset();
        return values_;
    }
    std::span<const double> interior() const
    {
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(grid_.ghost),
                                                       static_cast<std::size_t>(grid_.m));
    }
    std::span<double> interior_mut()
    {
        ghosts_.reset();
        return std::span<double>(values_).subspan(static_cast<std::size_t>(grid_.ghost),
                                                 static_cast<std::size_t>(grid_.m));
    }

    bool ghosts_filled() const { return ghosts_.has_value(); }
    /// Boundary conditions the ghost layer was last filled with.
    const BoundaryPair& ghost_bc() const;
    void mark_ghosts_filled(const BoundaryPair& bc) { ghosts_ = bc; }

private:
    Grid1D grid_;
    std::vector<double> values_;
    std::optional<BoundaryPair> ghosts_;
};

/// Samples `f` at the interior centres of a fresh field.
template <class F> Field sample(const Grid1D& grid, F&& f)
{
    Field out(grid);
    auto in = out.interior_mut();
    for (int j = 1; j <= grid.m; ++j) {
        in[static_cast<std::size_t>(j - 1)] = f(grid.center(j));
    }
    return out;
}

/// Point values on a 2D grid, row-major over (y, x), ghosts on all sides.
class Field2D {
public:
    Field2D() = default;
    explicit Field2D(const Grid2D& grid, double fill = 0.0);

    const Grid2D& grid() const { return grid_; }

    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(grid_.y.offset(j)) * static_cast<std::size_t>(grid_.x.total())
               + static_cast<std::size_t>(grid_.x.offset(i));
    }
    double at(int i, int j) const { return values_[index(i, j)]; }
    double& ref(int i, int j) { return values_[index(i, j)]; }

    std::span<const double> storage() const { return values_; }
    std::span<double> storage_mut() { return values_; }

private:
    Grid2D grid_;
    std::vector<double> values_;
};

/// Samples a field on the coarse grid by picking the fine value at each
/// coincident centre. Requires fine.m / coarse.m == 3^k, k >= 1.
Field restrict_to_coarse(const Field& fine, const Grid1D& coarse_grid);

/// Returns k when `ratio` is 3^k with k >= 1, otherwise nothing.
std::optional<int> power_of_three(int ratio);

} // namespace relaxrd
