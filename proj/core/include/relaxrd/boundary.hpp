#pragma once

#include <functional>
#include <string>

namespace relaxrd {

enum class BoundaryKind { Periodic, Dirichlet, FreeFlow };

enum class Side { Left, Right };

/// Boundary condition on one side of one axis.
///
/// Dirichlet values may depend on time, which is how the travelling-wave
/// problems pin the exact solution at the domain ends.
struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::FreeFlow;
    std::function<double(double)> value;

    static BoundaryCondition periodic() { return {BoundaryKind::Periodic, {}}; }
    static BoundaryCondition free_flow() { return {BoundaryKind::FreeFlow, {}}; }
    static BoundaryCondition dirichlet(double v)
    {
        return {BoundaryKind::Dirichlet, [v](double) { return v; }};
    }
    static BoundaryCondition dirichlet(std::function<double(double)> f)
    {
        return {BoundaryKind::Dirichlet, std::move(f)};
    }

    double value_at(double t) const { return value ? value(t) : 0.0; }
    bool physical() const { return kind != BoundaryKind::Periodic; }
};

/// Conditions for both ends of one axis. Periodic must be set on both sides
/// or neither; `validate` enforces that.
struct BoundaryPair {
    BoundaryCondition left = BoundaryCondition::free_flow();
    BoundaryCondition right = BoundaryCondition::free_flow();

    static BoundaryPair periodic() { return {BoundaryCondition::periodic(), BoundaryCondition::periodic()}; }
    static BoundaryPair free_flow() { return {BoundaryCondition::free_flow(), BoundaryCondition::free_flow()}; }
    static BoundaryPair dirichlet(double l, double r)
    {
        return {BoundaryCondition::dirichlet(l), BoundaryCondition::dirichlet(r)};
    }

    bool periodic_axis() const { return left.kind == BoundaryKind::Periodic; }
    const BoundaryCondition& on(Side s) const { return s == Side::Left ? left : right; }
    void validate() const;
};

std::string to_string(BoundaryKind kind);

} // namespace relaxrd
