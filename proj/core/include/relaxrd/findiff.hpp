#pragma once

#include "relaxrd/boundary.hpp"
#include "relaxrd/mesh.hpp"

#include <span>
#include <vector>

namespace relaxrd {

/// First-derivative weights of order 2p on windows of 2p+1 consecutive points.
///
/// Row e evaluates the derivative at window point e (0 <= e <= 2p); row p is
/// the centred stencil, the others are the one-sided rows used next to a
/// physical boundary. Weights are in units of 1/h and are obtained from the
/// moment conditions at construction.
class StencilTable {
public:
    explicit StencilTable(int order);

    int order() const { return order_; }
    int radius() const { return order_ / 2; }
    int width() const { return order_ + 1; }
    std::span<const double> row(int e) const;
    std::span<const double> centered() const { return row(radius()); }

private:
    int order_;
    std::vector<double> weights_;
};

/// Shared immutable table for order 2, 4 or 6.
const StencilTable& stencil_table(int order);

bool supported_gradient_order(int order);

/// Derivative of `u`, including the ghost layer.
///
/// Interior cells use centred rows; cells closer than p to a physical
/// boundary use one-sided rows over interior points only. Ghost cells get the
/// derivative of the boundary extrapolant on physical sides and wrap-around
/// values on periodic axes. The output is marked filled with u's conditions.
Field gradient(const Field& u, int order);
void gradient_into(const Field& u, int order, Field& out);

/// Extrapolation weights for the ghost layer on one physical side.
///
/// The degree-d polynomial through the first d interior values that also
/// satisfies the boundary constraint (value for Dirichlet, zero slope for
/// free flow) is evaluated at every ghost centre.
class GhostExtrapolator {
public:
    GhostExtrapolator(BoundaryKind kind, int degree, int ghost);

    /// Writes ghosts on `side` of the storage; `datum` is the Dirichlet value.
    void apply(std::span<double> storage, int m, Side side, double datum) const;

    int degree() const { return degree_; }

private:
    BoundaryKind kind_;
    int degree_;
    int ghost_;
    // ghost_ rows of (degree_ + 1) weights: [datum, u_1, ..., u_d].
    std::vector<double> weights_;
};

/// Ghost filling for both ends of one axis, reusable across steps.
class AxisGhostFiller {
public:
    AxisGhostFiller() = default;
    AxisGhostFiller(BoundaryPair bc, int degree, int ghost);

    void fill(Field& f, double t) const;
    /// Raw variant for line buffers of `m` interior points and the configured ghosts.
    void fill(std::span<double> storage, int m, double t) const;

    const BoundaryPair& bc() const { return bc_; }

private:
    BoundaryPair bc_;
    int degree_ = 2;
    int ghost_ = 0;
    std::vector<GhostExtrapolator> sides_;
};

/// Populates the ghost layer of `u` from its interior values and marks it filled.
/// `fit_degree` is the even degree 2p of the boundary polynomial.
void fill_ghosts(Field& u, const BoundaryPair& bc, int fit_degree, double t = 0.0);

} // namespace relaxrd
