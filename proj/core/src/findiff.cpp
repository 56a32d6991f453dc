#include "relaxrd/findiff.hpp"

#include "relaxrd/detail/linsolve.hpp"
#include "relaxrd/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace relaxrd {

namespace {

std::vector<long double> monomials(long double xi, int n)
{
    std::vector<long double> out(static_cast<std::size_t>(n));
    long double p = 1.0L;
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = p;
        p *= xi;
    }
    return out;
}

void require_order(int order)
{
    if (!supported_gradient_order(order)) {
        throw InvalidArgument("gradient order must be 2, 4 or 6, got " + std::to_string(order));
    }
}

} // namespace

bool supported_gradient_order(int order) { return order == 2 || order == 4 || order == 6; }

StencilTable::StencilTable(int order) : order_(order)
{
    require_order(order);
    const int n = width();
    std::vector<long double> target(static_cast<std::size_t>(n), 0.0L);
    target[1] = 1.0L;
    weights_.reserve(static_cast<std::size_t>(n * n));
    for (int e = 0; e < n; ++e) {
        std::vector<std::vector<long double>> moments;
        for (int q = 0; q < n; ++q) {
            moments.push_back(monomials(static_cast<long double>(q - e), n));
        }
        const auto w = detail::moment_weights(moments, target);
        weights_.insert(weights_.end(), w.begin(), w.end());
    }
    // Row n-1-e is row e reflected and negated; make that hold bit for bit
    // (the centred row then has an exact zero in the middle).
    for (int e = 0; e <= n / 2; ++e) {
        for (int q = 0; q < n; ++q) {
            double& a = weights_[static_cast<std::size_t>(e * n + q)];
            double& b = weights_[static_cast<std::size_t>((n - 1 - e) * n + (n - 1 - q))];
            const double mean = 0.5 * (a - b);
            a = mean;
            b = -mean;
        }
    }
}

std::span<const double> StencilTable::row(int e) const
{
    return std::span<const double>(weights_).subspan(static_cast<std::size_t>(e * width()),
                                                     static_cast<std::size_t>(width()));
}

const StencilTable& stencil_table(int order)
{
    require_order(order);
    static const StencilTable t2(2);
    static const StencilTable t4(4);
    static const StencilTable t6(6);
    return order == 2 ? t2 : (order == 4 ? t4 : t6);
}

Field gradient(const Field& u, int order)
{
    Field out(u.grid());
    gradient_into(u, order, out);
    return out;
}

void gradient_into(const Field& u, int order, Field& out)
{
    const auto& table = stencil_table(order);
    const BoundaryPair& bc = u.ghost_bc();
    const Grid1D& g = u.grid();
    const int p = table.radius();
    const int n = table.width();
    const bool periodic = bc.periodic_axis();
    if (periodic && g.ghost < p) {
        throw InvalidArgument("gradient: periodic axis needs at least p ghost cells");
    }
    if (!periodic && g.m < n) {
        throw InvalidArgument("gradient: need at least 2p+1 interior cells next to a physical boundary");
    }
    if (!out.grid().same_cells(g) || out.grid().ghost != g.ghost) {
        out = Field(g);
    }

    auto src = u.storage();
    auto dst = out.storage_mut();
    const double inv_h = 1.0 / g.h;

    // Derivative at cell j from the window of n cells starting at `first`,
    // taken on offsets from u_j so constants give exactly zero.
    auto window = [&](int j, int first) {
        const auto w = table.row(j - first);
        const auto base = static_cast<std::size_t>(g.offset(first));
        const double uj = src[static_cast<std::size_t>(g.offset(j))];
        double s = 0.0;
        for (int q = 0; q < n; ++q) {
            s += w[static_cast<std::size_t>(q)] * (src[base + static_cast<std::size_t>(q)] - uj);
        }
        return s * inv_h;
    };

    for (int j = 1; j <= g.m; ++j) {
        int first = j - p;
        if (!periodic) {
            first = std::clamp(first, 1, g.m - n + 1);
        }
        dst[static_cast<std::size_t>(g.offset(j))] = window(j, first);
    }

    for (int k = 1; k <= g.ghost; ++k) {
        const int jl = 1 - k;
        const int jr = g.m + k;
        if (periodic) {
            dst[static_cast<std::size_t>(g.offset(jl))] = dst[static_cast<std::size_t>(g.offset(jl + g.m))];
            dst[static_cast<std::size_t>(g.offset(jr))] = dst[static_cast<std::size_t>(g.offset(jr - g.m))];
        } else {
            // Every point of these windows lies on the boundary extrapolant.
            dst[static_cast<std::size_t>(g.offset(jl))] = window(jl, std::max(1 - g.ghost, jl - p));
            const int last = std::min(g.m + g.ghost, jr + p);
            dst[static_cast<std::size_t>(g.offset(jr))] = window(jr, last - n + 1);
        }
    }
    out.mark_ghosts_filled(bc);
}

GhostExtrapolator::GhostExtrapolator(BoundaryKind kind, int degree, int ghost)
    : kind_(kind), degree_(degree), ghost_(ghost)
{
    if (kind == BoundaryKind::Periodic) {
        throw InvalidArgument("GhostExtrapolator: periodic sides are filled by wrap-around");
    }
    if (degree < 2 || degree % 2 != 0) {
        throw InvalidArgument("boundary polynomial degree must be even and >= 2");
    }
    const int n = degree + 1;
    std::vector<std::vector<long double>> moments;
    // Coordinate xi = (x - wall)/h pointing into the domain; interior centres at i - 1/2.
    std::vector<long double> constraint(static_cast<std::size_t>(n), 0.0L);
    constraint[kind == BoundaryKind::Dirichlet ? 0 : 1] = 1.0L;
    moments.push_back(constraint);
    for (int i = 1; i <= degree; ++i) {
        moments.push_back(monomials(static_cast<long double>(i) - 0.5L, n));
    }
    for (int k = 1; k <= ghost; ++k) {
        const auto w = detail::moment_weights(moments, monomials(0.5L - static_cast<long double>(k), n));
        weights_.insert(weights_.end(), w.begin(), w.end());
    }
}

void GhostExtrapolator::apply(std::span<double> s, int m, Side side, double datum) const
{
    const int n = degree_ + 1;
    if (m < degree_) {
        throw InvalidArgument("fill_ghosts: need at least " + std::to_string(degree_) + " interior cells");
    }
    const auto g = static_cast<std::size_t>(ghost_);
    auto interior = [&](int i) {
        return s[side == Side::Left ? g + static_cast<std::size_t>(i - 1) : g + static_cast<std::size_t>(m - i)];
    };
    // The weights reproduce constants, so the extrapolant is written as
    // offsets from the wall cell and constant data extends exactly.
    const double u1 = interior(1);
    const double lead = kind_ == BoundaryKind::Dirichlet ? datum - u1 : 0.0;
    for (int k = 1; k <= ghost_; ++k) {
        const double* w = weights_.data() + static_cast<std::size_t>((k - 1) * n);
        double v = w[0] * lead;
        for (int i = 2; i <= degree_; ++i) {
            v += w[i] * (interior(i) - u1);
        }
        v += u1;
        const std::size_t dst = side == Side::Left ? g - static_cast<std::size_t>(k)
                                                   : g + static_cast<std::size_t>(m + k - 1);
        s[dst] = v;
    }
}

AxisGhostFiller::AxisGhostFiller(BoundaryPair bc, int degree, int ghost)
    : bc_(std::move(bc)), degree_(degree), ghost_(ghost)
{
    bc_.validate();
    if (!bc_.periodic_axis()) {
        sides_.emplace_back(bc_.left.kind, degree, ghost);
        sides_.emplace_back(bc_.right.kind, degree, ghost);
    }
}

void AxisGhostFiller::fill(std::span<double> s, int m, double t) const
{
    if (m < degree_) {
        throw InvalidArgument("fill_ghosts: grid has " + std::to_string(m) + " cells, need at least "
                              + std::to_string(degree_));
    }
    const auto g = static_cast<std::size_t>(ghost_);
    const auto mm = static_cast<std::size_t>(m);
    if (bc_.periodic_axis()) {
        if (ghost_ > m) {
            throw InvalidArgument("fill_ghosts: more ghost cells than interior cells on a periodic axis");
        }
        for (std::size_t k = 1; k <= g; ++k) {
            s[g - k] = s[g + mm - k];
            s[g + mm + k - 1] = s[g + k - 1];
        }
        return;
    }
    sides_[0].apply(s, m, Side::Left, bc_.left.value_at(t));
    sides_[1].apply(s, m, Side::Right, bc_.right.value_at(t));
}

void AxisGhostFiller::fill(Field& f, double t) const
{
    if (f.grid().ghost != ghost_) {
        throw InvalidArgument("fill_ghosts: filler built for a different ghost count");
    }
    fill(f.storage_mut(), f.grid().m, t);
    f.mark_ghosts_filled(bc_);
}

void fill_ghosts(Field& u, const BoundaryPair& bc, int fit_degree, double t)
{
    AxisGhostFiller(bc, fit_degree, u.grid().ghost).fill(u, t);
}

} // namespace relaxrd
