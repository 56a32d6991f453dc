#pragma once

#include "relaxrd/mesh.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace relaxrd {

/// Reconstruction of interface values from point values.
///
/// Point values are treated as cell averages of the flux primitive, so the
/// difference of reconstructed interface values divided by h approximates the
/// derivative at the cell centre to the order of the reconstruction.
struct ReconstructionKind {
    enum class Family { Constant, ENO, WENO };

    Family family = Family::Constant;
    int order = 1;

    static ReconstructionKind constant() { return {Family::Constant, 1}; }
    static ReconstructionKind eno(int order);
    static ReconstructionKind weno(int order);
    /// Parses "constant", "enoN" or "wenoN".
    static ReconstructionKind parse(const std::string& text);

    /// Cells on each side of the base cell a stencil may reach.
    int stencil_radius() const;
    /// Ghost cells needed to produce every interface value of the grid.
    int required_ghosts() const;
    std::string name() const;

    bool operator==(const ReconstructionKind&) const = default;
};

/// Interface states for interfaces 0..m; interface k separates cells k and k+1.
struct EdgeValues {
    std::vector<double> left;  ///< u^-_{k+1/2}, extrapolated from cell k
    std::vector<double> right; ///< u^+_{k+1/2}, extrapolated from cell k+1
};

/// Nonlinear WENO weights alpha_k = d_k / (eps + beta_k)^2, renormalised.
std::vector<double> weno_weights(std::span<const double> smoothness, std::span<const double> linear_weights,
                                 double eps = 1e-6);

inline constexpr double kWenoEpsilon = 1e-6;

/// Reusable reconstruction kernel with its coefficient tables and scratch.
class Reconstructor {
public:
    explicit Reconstructor(ReconstructionKind kind);

    const ReconstructionKind& kind() const { return kind_; }

    /// Left states u^- at interfaces 0..m from a ghosted line of m cells.
    void minus(std::span<const double> line, int m, int ghost, std::span<double> out);
    /// Right states u^+ at interfaces 0..m.
    void plus(std::span<const double> line, int m, int ghost, std::span<double> out);

    /// ENO weights for an r-cell stencil starting `shift` cells left of the
    /// base cell, evaluated at its right (`right_edge`) or left edge.
    static std::span<const double> eno_weights(int r, int shift, bool right_edge);

private:
    void build_differences(std::span<const double> line);
    void check(std::span<const double> line, int m, int ghost, std::span<double> out) const;

    ReconstructionKind kind_;
    std::array<std::vector<double>, 6> diffs_;
};

/// Both interface states of `values`, whose ghost layer must be populated.
EdgeValues reconstruct_edges(const Field& values, ReconstructionKind kind);

} // namespace relaxrd
