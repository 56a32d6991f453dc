#pragma once

#include "relaxrd/boundary.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relaxrd {

/// Diffusivity of one unknown as a function of every unknown at the point.
using Diffusivity = std::function<double(std::span<const double>)>;

/// One scalar unknown of u_t = D div(A(u) grad u) + g(u).
struct Unknown {
    std::string name;
    double D = 1.0;
    /// Empty when A is identically zero; such unknowns only see the reaction.
    Diffusivity A;

    bool diffusive() const { return static_cast<bool>(A); }
};

/// Extra term gamma * div(u_carrier grad u_potential) added to the carrier.
struct ExtraAdvection {
    double gamma = 0.0;
    std::size_t carrier = 0;
    std::size_t potential = 0;
};

/// Increment applied to the state at a fixed time (for staged releases).
struct StateEvent {
    double time = 0.0;
    std::function<double(std::size_t unknown, double x, double y)> increment;
};

/// Full problem description. Functions must be pure and reentrant.
struct Problem {
    std::string name;
    int dim = 1;
    std::vector<Unknown> unknowns;

    /// Writes g(u) for every unknown; empty means g == 0.
    std::function<void(std::span<const double> u, std::span<double> rate)> reaction;
    /// Optional bound on the reaction Lipschitz constant at a point; when
    /// absent the time-step control estimates it by finite differences.
    std::function<double(std::span<const double> u)> reaction_rate_bound;
    std::optional<ExtraAdvection> advection;

    std::function<double(std::size_t unknown, double x, double y)> initial;
    std::array<double, 2> x_domain{0.0, 1.0};
    std::array<double, 2> y_domain{0.0, 1.0};
    BoundaryPair bc_x = BoundaryPair::periodic();
    BoundaryPair bc_y = BoundaryPair::periodic();

    /// Exact solution of unknown 0, when known.
    std::function<double(double t, double x, double y)> exact;
    std::vector<StateEvent> events;

    std::size_t count() const { return unknowns.size(); }
    bool has_reaction() const { return static_cast<bool>(reaction); }
    void validate() const;
};

} // namespace relaxrd
