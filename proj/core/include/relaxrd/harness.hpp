#pragma once

#include "relaxrd/mesh.hpp"
#include "relaxrd/problem.hpp"
#include "relaxrd/relax.hpp"

#include <optional>
#include <span>
#include <vector>

namespace relaxrd {

enum class Norm { L1, L2 };

/// Grid-weighted norm of a difference: L1 = vol sum |e|, L2 = sqrt(vol sum e^2).
double error_norm(std::span<const double> numeric, std::span<const double> reference, double cell_volume, Norm which);
double error_norm(const Field& numeric, const Field& reference, Norm which);
double error_norm(const Field2D& numeric, const Field2D& reference, Norm which);

/// log(E_{k-1} / E_k) / log(ratio) for k >= 1; the first entry is empty.
std::vector<std::optional<double>> convergence_rates(std::span<const double> errors, double ratio);

struct ReportRow {
    int m = 0;
    double error_l1 = 0.0;
    double error_l2 = 0.0;
    std::optional<double> rate_l1;
    std::optional<double> rate_l2;
    double wall_time = 0.0;
};

struct RunReport {
    int refinement = 0;
    std::vector<ReportRow> rows;

    /// Mean of the per-row rates, i.e. log(E_first / E_last) / log(m_last / m_first).
    double average_rate(Norm which) const;
    /// Rate of the finest pair of rows.
    double final_rate(Norm which) const;
};

struct Reference {
    enum class Kind { Exact, FineGrid };

    Kind kind = Kind::Exact;
    int m_ref = 0;

    static Reference exact() { return {Kind::Exact, 0}; }
    static Reference fine_grid(int m_ref) { return {Kind::FineGrid, m_ref}; }

    bool operator==(const Reference&) const = default;
};

/// Runs a 1D problem on every grid of `m_list` (constant integer refinement
/// factor) and tabulates errors at t_end against the exact solution or a
/// fine-grid run sampled at coincident centres. Rows may run on `threads`
/// threads; row order always follows m_list.
RunReport convergence_study(const Problem& problem, const SchemeConfig& cfg, const std::vector<int>& m_list,
                            double t_end, Reference reference, int threads = 1);

/// Runs the first-order relaxed scheme (constant reconstruction, RK1) and a
/// direct explicit discretisation of u_t = D (A(u) u_x)_x + g side by side for
/// `steps` steps with equal time steps; returns the largest pointwise gap.
double oracle_compare(const Problem& problem, int m, int steps, PhiPolicy phi = PhiPolicy::automatic(1.0));

// Diagnostics shared by the acceptance checks and the CLI.

double total_mass(std::span<const double> values, double cell_volume);
double total_variation(std::span<const double> values);
/// Right edge of the last cell whose value exceeds `threshold`, or a - if none.
double support_right_edge(std::span<const double> values, const Grid1D& grid, double threshold);
/// |sum u e^{i k theta}| / sum u over cells with u > 0 (theta about the origin).
double angular_mode_ratio(std::span<const double> values, const Mesh& mesh, int mode);

} // namespace relaxrd
