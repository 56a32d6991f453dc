#include "relaxrd/harness.hpp"

#include "relaxrd/error.hpp"
#include "relaxrd/findiff.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

namespace relaxrd {

double error_norm(std::span<const double> numeric, std::span<const double> reference, double cell_volume, Norm which)
{
    if (numeric.size() != reference.size()) {
        throw InvalidArgument("error_norm: fields have different sizes");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
        const double e = numeric[i] - reference[i];
        s += which == Norm::L1 ? std::fabs(e) : e * e;
    }
    return which == Norm::L1 ? cell_volume * s : std::sqrt(cell_volume * s);
}

double error_norm(const Field& numeric, const Field& reference, Norm which)
{
    if (!numeric.grid().same_cells(reference.grid())) {
        throw InvalidArgument("error_norm: fields live on different grids");
    }
    return error_norm(numeric.interior(), reference.interior(), numeric.grid().h, which);
}

double error_norm(const Field2D& numeric, const Field2D& reference, Norm which)
{
    const Grid2D& g = numeric.grid();
    if (!g.x.same_cells(reference.grid().x) || !g.y.same_cells(reference.grid().y)) {
        throw InvalidArgument("error_norm: fields live on different grids");
    }
    std::vector<double> a;
    std::vector<double> b;
    for (int j = 1; j <= g.y.m; ++j) {
        for (int i = 1; i <= g.x.m; ++i) {
            a.push_back(numeric.at(i, j));
            b.push_back(reference.at(i, j));
        }
    }
    return error_norm(a, b, g.x.h * g.y.h, which);
}

std::vector<std::optional<double>> convergence_rates(std::span<const double> errors, double ratio)
{
    if (!(ratio > 1.0)) {
        throw InvalidArgument("convergence_rates: refinement ratio must exceed 1");
    }
    std::vector<std::optional<double>> out(errors.size());
    for (std::size_t k = 1; k < errors.size(); ++k) {
        out[k] = std::log(errors[k - 1] / errors[k]) / std::log(ratio);
    }
    return out;
}

namespace {

double rate_between(const ReportRow& coarse, const ReportRow& fine, Norm which)
{
    const double ec = which == Norm::L1 ? coarse.error_l1 : coarse.error_l2;
    const double ef = which == Norm::L1 ? fine.error_l1 : fine.error_l2;
    return std::log(ec / ef) / std::log(static_cast<double>(fine.m) / coarse.m);
}

} // namespace

double RunReport::average_rate(Norm which) const
{
    if (rows.size() < 2) {
        throw InvalidArgument("average_rate: need at least two rows");
    }
    return rate_between(rows.front(), rows.back(), which);
}

double RunReport::final_rate(Norm which) const
{
    if (rows.size() < 2) {
        throw InvalidArgument("final_rate: need at least two rows");
    }
    return rate_between(rows[rows.size() - 2], rows.back(), which);
}

namespace {

std::vector<double> final_values(const Problem& problem, const SchemeConfig& cfg, int m, double t_end)
{
    const Mesh mesh = Mesh::make(problem, cfg, m);
    auto snaps = run(problem, mesh, cfg, t_end, {t_end});
    return std::move(snaps.back().fields[0]);
}

} // namespace

RunReport convergence_study(const Problem& problem, const SchemeConfig& cfg, const std::vector<int>& m_list,
                            double t_end, Reference reference, int threads)
{
    if (problem.dim != 1) {
        throw InvalidArgument("convergence_study: one-dimensional problems only");
    }
    if (m_list.size() < 2) {
        throw InvalidArgument("convergence_study: need at least two grids");
    }
    if (m_list[0] < 1 || m_list[1] % m_list[0] != 0 || m_list[1] <= m_list[0]) {
        throw InvalidArgument("convergence_study: grids must grow by an integer factor");
    }
    const int factor = m_list[1] / m_list[0];
    for (std::size_t k = 1; k < m_list.size(); ++k) {
        if (m_list[k] != m_list[k - 1] * factor) {
            throw InvalidArgument("convergence_study: grids must grow by a constant integer factor");
        }
    }
    if (reference.kind == Reference::Kind::Exact && !problem.exact) {
        throw InvalidArgument("convergence_study: problem has no exact solution");
    }
    if (reference.kind == Reference::Kind::FineGrid) {
        if (reference.m_ref % m_list.back() != 0 || !power_of_three(reference.m_ref / m_list.back())) {
            throw InvalidArgument("convergence_study: reference grid must be 3^k times the finest grid");
        }
    }

    std::vector<double> fine;
    Grid1D fine_grid;
    if (reference.kind == Reference::Kind::FineGrid) {
        fine = final_values(problem, cfg, reference.m_ref, t_end);
        fine_grid = make_grid(problem.x_domain[0], problem.x_domain[1], reference.m_ref, 0);
    }

    RunReport report;
    report.refinement = factor;
    report.rows.resize(m_list.size());
    std::vector<std::exception_ptr> failures(m_list.size());

    auto do_row = [&](std::size_t k) {
        try {
            const int m = m_list[k];
            const auto t0 = std::chrono::steady_clock::now();
            auto values = final_values(problem, cfg, m, t_end);
            const auto t1 = std::chrono::steady_clock::now();
            const Grid1D grid = make_grid(problem.x_domain[0], problem.x_domain[1], m, 0);
            std::vector<double> ref(values.size());
            if (reference.kind == Reference::Kind::Exact) {
                for (int j = 1; j <= m; ++j) {
                    ref[static_cast<std::size_t>(j - 1)] = problem.exact(t_end, grid.center(j), 0.0);
                }
            } else {
                Field f(fine_grid);
                std::copy(fine.begin(), fine.end(), f.interior_mut().begin());
                const Field coarse = restrict_to_coarse(f, grid);
                std::copy(coarse.interior().begin(), coarse.interior().end(), ref.begin());
            }
            ReportRow& row = report.rows[k];
            row.m = m;
            row.error_l1 = error_norm(values, ref, grid.h, Norm::L1);
            row.error_l2 = error_norm(values, ref, grid.h, Norm::L2);
            row.wall_time = std::chrono::duration<double>(t1 - t0).count();
        } catch (...) {
            failures[k] = std::current_exception();
        }
    };

    const int workers = std::max(1, std::min(threads, static_cast<int>(m_list.size())));
    if (workers == 1) {
        for (std::size_t k = 0; k < m_list.size(); ++k) {
            do_row(k);
        }
    } else {
        // Largest grids first so the longest rows start early.
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < m_list.size();) {
                    do_row(m_list.size() - 1 - i);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    // Rethrow the first failing row unchanged so callers can tell faults from bad input.
    for (const auto& f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }

    std::vector<double> e1;
    std::vector<double> e2;
    for (const auto& r : report.rows) {
        e1.push_back(r.error_l1);
        e2.push_back(r.error_l2);
    }
    const auto r1 = convergence_rates(e1, factor);
    const auto r2 = convergence_rates(e2, factor);
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        report.rows[k].rate_l1 = r1[k];
        report.rows[k].rate_l2 = r2[k];
    }
    return report;
}

double oracle_compare(const Problem& problem, int m, int steps, PhiPolicy phi)
{
    if (problem.dim != 1) {
        throw InvalidArgument("oracle_compare: one-dimensional problems only");
    }
    if (steps < 0) {
        throw InvalidArgument("oracle_compare: negative step count");
    }
    SchemeConfig cfg = SchemeConfig::make(ReconstructionKind::constant(), 1);
    cfg.phi = phi;
    const Mesh mesh = Mesh::make(problem, cfg, m);
    RelaxStepper stepper(problem, mesh, cfg);
    RelaxState relaxed = stepper.initial_state();
    Fields direct = relaxed.u;

    const std::size_t nu = problem.count();
    const Grid1D& g = mesh.x;
    const AxisGhostFiller filler(problem.bc_x, cfg.gradient_order, g.ghost);
    std::vector<Field> lines(nu, Field(g));
    std::vector<double> point(nu);
    std::vector<double> rate(nu);
    std::vector<double> a_cell(static_cast<std::size_t>(g.total()));
    Fields next = direct;

    for (int n = 0; n < steps; ++n) {
        const double dt = std::min(stepper.stable_dt(relaxed), 1.0);
        for (std::size_t k = 0; k < nu; ++k) {
            std::copy(direct[k].begin(), direct[k].end(), lines[k].interior_mut().begin());
            filler.fill(lines[k], relaxed.t);
        }
        const double inv_h2 = 1.0 / (g.h * g.h);
        for (std::size_t k = 0; k < nu; ++k) {
            const Unknown& unk = problem.unknowns[k];
            for (std::size_t s = 0; s < a_cell.size(); ++s) {
                for (std::size_t q = 0; q < nu; ++q) {
                    point[q] = lines[q].storage()[s];
                }
                a_cell[s] = unk.diffusive() ? unk.A(point) : 0.0;
            }
            auto u = lines[k].storage();
            for (int j = 1; j <= g.m; ++j) {
                const auto s = static_cast<std::size_t>(g.offset(j));
                const double a_right = 0.5 * (a_cell[s] + a_cell[s + 1]);
                const double a_left = 0.5 * (a_cell[s - 1] + a_cell[s]);
                const double diff = a_right * (u[s + 1] - u[s]) - a_left * (u[s] - u[s - 1]);
                next[k][static_cast<std::size_t>(j - 1)] = u[s] + dt * unk.D * diff * inv_h2;
            }
        }
        if (problem.has_reaction()) {
            for (std::size_t c = 0; c < direct[0].size(); ++c) {
                for (std::size_t q = 0; q < nu; ++q) {
                    point[q] = direct[q][c];
                }
                problem.reaction(point, rate);
                for (std::size_t q = 0; q < nu; ++q) {
                    next[q][c] += dt * rate[q];
                }
            }
        }
        direct.swap(next);
        stepper.step(relaxed, dt);
    }

    double worst = 0.0;
    for (std::size_t k = 0; k < nu; ++k) {
        for (std::size_t c = 0; c < direct[k].size(); ++c) {
            worst = std::max(worst, std::fabs(direct[k][c] - relaxed.u[k][c]));
        }
    }
    return worst;
}

double total_mass(std::span<const double> values, double cell_volume)
{
    double s = 0.0;
    for (double v : values) {
        s += v;
    }
    return s * cell_volume;
}

double total_variation(std::span<const double> values)
{
    double tv = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        tv += std::fabs(values[i] - values[i - 1]);
    }
    return tv;
}

double support_right_edge(std::span<const double> values, const Grid1D& grid, double threshold)
{
    for (int j = grid.m; j >= 1; --j) {
        if (values[static_cast<std::size_t>(j - 1)] > threshold) {
            return grid.center(j) + 0.5 * grid.h;
        }
    }
    return grid.a;
}

double angular_mode_ratio(std::span<const double> values, const Mesh& mesh, int mode)
{
    if (mesh.dim != 2) {
        throw InvalidArgument("angular_mode_ratio: two-dimensional meshes only");
    }
    double re = 0.0;
    double im = 0.0;
    double mean = 0.0;
    for (int j = 1; j <= mesh.y.m; ++j) {
        for (int i = 1; i <= mesh.x.m; ++i) {
            const double u = values[static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(mesh.x.m)
                                    + static_cast<std::size_t>(i - 1)];
            if (!(u > 0.0)) {
                continue;
            }
            const double theta = std::atan2(mesh.y.center(j), mesh.x.center(i));
            re += u * std::cos(mode * theta);
            im += u * std::sin(mode * theta);
            mean += u;
        }
    }
    return mean > 0.0 ? std::hypot(re, im) / mean : 0.0;
}

} // namespace relaxrd
