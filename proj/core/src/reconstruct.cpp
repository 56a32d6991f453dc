#include "relaxrd/reconstruct.hpp"

#include "relaxrd/detail/linsolve.hpp"
#include "relaxrd/error.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

namespace relaxrd {

namespace {

constexpr int kMaxEno = 6;

// Weights for every ENO stencil: [r][shift][edge] -> r coefficients.
struct EnoTables {
    std::vector<double> data[kMaxEno + 1][kMaxEno][2];

    EnoTables()
    {
        for (int r = 1; r <= kMaxEno; ++r) {
            for (int shift = 0; shift < r; ++shift) {
                for (int edge = 0; edge < 2; ++edge) {
                    std::vector<std::vector<long double>> moments;
                    for (int q = 0; q < r; ++q) {
                        const long double lo = static_cast<long double>(q - shift) - 0.5L;
                        const long double hi = lo + 1.0L;
                        std::vector<long double> row(static_cast<std::size_t>(r));
                        long double plo = lo;
                        long double phi = hi;
                        for (int k = 0; k < r; ++k) {
                            row[static_cast<std::size_t>(k)] = (phi - plo) / static_cast<long double>(k + 1);
                            plo *= lo;
                            phi *= hi;
                        }
                        moments.push_back(std::move(row));
                    }
                    const long double x = edge == 1 ? 0.5L : -0.5L;
                    std::vector<long double> target(static_cast<std::size_t>(r));
                    long double p = 1.0L;
                    for (int k = 0; k < r; ++k) {
                        target[static_cast<std::size_t>(k)] = p;
                        p *= x;
                    }
                    data[r][shift][edge] = detail::moment_weights(moments, target);
                }
            }
        }
    }
};

const EnoTables& eno_tables()
{
    static const EnoTables tables;
    return tables;
}

// Right-edge value of the centre cell from (u_{j-1}, u_j, u_{j+1}).
inline double weno3_edge(double um, double u0, double up)
{
    const double b0 = (up - u0) * (up - u0);
    const double b1 = (u0 - um) * (u0 - um);
    const double a0 = (2.0 / 3.0) / ((kWenoEpsilon + b0) * (kWenoEpsilon + b0));
    const double a1 = (1.0 / 3.0) / ((kWenoEpsilon + b1) * (kWenoEpsilon + b1));
    // Candidates as offsets from u0, so constant data comes back exactly.
    const double q0 = 0.5 * (up - u0);
    const double q1 = 0.5 * (u0 - um);
    return u0 + (a0 * q0 + a1 * q1) / (a0 + a1);
}

// Right-edge value of the centre cell from (u_{j-2}, ..., u_{j+2}).
inline double weno5_edge(double umm, double um, double u0, double up, double upp)
{
    const double b0 = 13.0 / 12.0 * (u0 - 2.0 * up + upp) * (u0 - 2.0 * up + upp)
                      + 0.25 * (3.0 * u0 - 4.0 * up + upp) * (3.0 * u0 - 4.0 * up + upp);
    const double b1 = 13.0 / 12.0 * (um - 2.0 * u0 + up) * (um - 2.0 * u0 + up) + 0.25 * (um - up) * (um - up);
    const double b2 = 13.0 / 12.0 * (umm - 2.0 * um + u0) * (umm - 2.0 * um + u0)
                      + 0.25 * (umm - 4.0 * um + 3.0 * u0) * (umm - 4.0 * um + 3.0 * u0);
    const double a0 = 0.3 / ((kWenoEpsilon + b0) * (kWenoEpsilon + b0));
    const double a1 = 0.6 / ((kWenoEpsilon + b1) * (kWenoEpsilon + b1));
    const double a2 = 0.1 / ((kWenoEpsilon + b2) * (kWenoEpsilon + b2));
    const double q0 = (5.0 * (up - u0) - (upp - u0)) / 6.0;
    const double q1 = (2.0 * (up - u0) - (um - u0)) / 6.0;
    const double q2 = (2.0 * (umm - u0) - 7.0 * (um - u0)) / 6.0;
    return u0 + (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2);
}

// Weights sum to one, so the stencil value is u_c plus weighted offsets.
inline double apply_weights(const std::vector<double>& w, std::span<const double> u, std::size_t first,
                            std::size_t c)
{
    double s = 0.0;
    for (std::size_t q = 0; q < w.size(); ++q) {
        s += w[q] * (u[first + q] - u[c]);
    }
    return u[c] + s;
}

} // namespace

ReconstructionKind ReconstructionKind::eno(int order)
{
    if (order < 2 || order > kMaxEno) {
        throw InvalidArgument("ENO order out of range 2..6: " + std::to_string(order));
    }
    return {Family::ENO, order};
}

ReconstructionKind ReconstructionKind::weno(int order)
{
    if (order != 3 && order != 5) {
        throw InvalidArgument("WENO order must be 3 or 5, got " + std::to_string(order));
    }
    return {Family::WENO, order};
}

ReconstructionKind ReconstructionKind::parse(const std::string& text)
{
    std::string s;
    for (char c : text) {
        s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (s == "constant") {
        return constant();
    }
    auto order_of = [&](std::size_t prefix) {
        const std::string digits = s.substr(prefix);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
            throw InvalidArgument("unknown reconstruction '" + text + "'");
        }
        return std::stoi(digits);
    };
    if (s.rfind("weno", 0) == 0) {
        return weno(order_of(4));
    }
    if (s.rfind("eno", 0) == 0) {
        return eno(order_of(3));
    }
    throw InvalidArgument("unknown reconstruction '" + text + "'");
}

int ReconstructionKind::stencil_radius() const
{
    switch (family) {
    case Family::Constant:
        return 0;
    case Family::ENO:
        return order - 1;
    case Family::WENO:
        return (order + 1) / 2;
    }
    return 0;
}

int ReconstructionKind::required_ghosts() const
{
    switch (family) {
    case Family::Constant:
        return 1;
    case Family::ENO:
        return order;
    case Family::WENO:
        return (order + 1) / 2;
    }
    return 1;
}

std::string ReconstructionKind::name() const
{
    switch (family) {
    case Family::Constant:
        return "constant";
    case Family::ENO:
        return "eno" + std::to_string(order);
    case Family::WENO:
        return "weno" + std::to_string(order);
    }
    return "?";
}

std::vector<double> weno_weights(std::span<const double> smoothness, std::span<const double> linear_weights,
                                 double eps)
{
    if (smoothness.size() != linear_weights.size() || smoothness.empty()) {
        throw InvalidArgument("weno_weights: size mismatch");
    }
    std::vector<double> w(smoothness.size());
    double total = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double d = eps + smoothness[k];
        w[k] = linear_weights[k] / (d * d);
        total += w[k];
    }
    for (double& x : w) {
        x /= total;
    }
    return w;
}

Reconstructor::Reconstructor(ReconstructionKind kind) : kind_(kind)
{
    if (kind.family == ReconstructionKind::Family::ENO) {
        (void)eno_tables();
    }
}

std::span<const double> Reconstructor::eno_weights(int r, int shift, bool right_edge)
{
    if (r < 1 || r > kMaxEno || shift < 0 || shift >= r) {
        throw InvalidArgument("eno_weights: stencil out of range");
    }
    return eno_tables().data[r][shift][right_edge ? 1 : 0];
}

void Reconstructor::check(std::span<const double> line, int m, int ghost, std::span<double> out) const
{
    if (ghost < kind_.required_ghosts()) {
        throw InvalidArgument(kind_.name() + " needs " + std::to_string(kind_.required_ghosts())
                              + " ghost cells, line has " + std::to_string(ghost));
    }
    if (line.size() != static_cast<std::size_t>(m + 2 * ghost) || out.size() != static_cast<std::size_t>(m + 1)) {
        throw InvalidArgument("reconstruct: buffer sizes do not match the grid");
    }
}

void Reconstructor::build_differences(std::span<const double> line)
{
    const std::size_t n = line.size();
    for (int l = 1; l < kind_.order; ++l) {
        auto& d = diffs_[static_cast<std::size_t>(l)];
        d.resize(n - static_cast<std::size_t>(l));
        if (l == 1) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                d[i] = line[i + 1] - line[i];
            }
        } else {
            const auto& prev = diffs_[static_cast<std::size_t>(l - 1)];
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] = prev[i + 1] - prev[i];
            }
        }
    }
}

void Reconstructor::minus(std::span<const double> u, int m, int g, std::span<double> out)
{
    check(u, m, g, out);
    const std::size_t gs = static_cast<std::size_t>(g);
    switch (kind_.family) {
    case ReconstructionKind::Family::Constant:
        for (int k = 0; k <= m; ++k) {
            out[static_cast<std::size_t>(k)] = u[gs + static_cast<std::size_t>(k) - 1];
        }
        return;
    case ReconstructionKind::Family::WENO:
        for (int k = 0; k <= m; ++k) {
            const std::size_t c = gs + static_cast<std::size_t>(k) - 1;
            out[static_cast<std::size_t>(k)] = kind_.order == 3
                                                   ? weno3_edge(u[c - 1], u[c], u[c + 1])
                                                   : weno5_edge(u[c - 2], u[c - 1], u[c], u[c + 1], u[c + 2]);
        }
        return;
    case ReconstructionKind::Family::ENO:
        break;
    }
    const int r = kind_.order;
    build_differences(u);
    const auto& tables = eno_tables();
    for (int k = 0; k <= m; ++k) {
        const std::size_t c = gs + static_cast<std::size_t>(k) - 1;
        std::size_t st = c;
        for (int l = 1; l < r; ++l) {
            const auto& d = diffs_[static_cast<std::size_t>(l)];
            // Ties extend upwind, which is to the left for u^-.
            if (std::fabs(d[st - 1]) <= std::fabs(d[st])) {
                --st;
            }
        }
        const auto& w = tables.data[r][c - st][1];
        out[static_cast<std::size_t>(k)] = apply_weights(w, u, st, c);
    }
}

void Reconstructor::plus(std::span<const double> u, int m, int g, std::span<double> out)
{
    check(u, m, g, out);
    const std::size_t gs = static_cast<std::size_t>(g);
    switch (kind_.family) {
    case ReconstructionKind::Family::Constant:
        for (int k = 0; k <= m; ++k) {
            out[static_cast<std::size_t>(k)] = u[gs + static_cast<std::size_t>(k)];
        }
        return;
    case ReconstructionKind::Family::WENO:
        for (int k = 0; k <= m; ++k) {
            const std::size_t c = gs + static_cast<std::size_t>(k);
            out[static_cast<std::size_t>(k)] = kind_.order == 3
                                                   ? weno3_edge(u[c + 1], u[c], u[c - 1])
                                                   : weno5_edge(u[c + 2], u[c + 1], u[c], u[c - 1], u[c - 2]);
        }
        return;
    case ReconstructionKind::Family::ENO:
        break;
    }
    const int r = kind_.order;
    build_differences(u);
    const auto& tables = eno_tables();
    for (int k = 0; k <= m; ++k) {
        const std::size_t c = gs + static_cast<std::size_t>(k);
        std::size_t st = c;
        for (int l = 1; l < r; ++l) {
            const auto& d = diffs_[static_cast<std::size_t>(l)];
            // Ties extend upwind, which is to the right for u^+.
            if (std::fabs(d[st - 1]) < std::fabs(d[st])) {
                --st;
            }
        }
        const auto& w = tables.data[r][c - st][0];
        out[static_cast<std::size_t>(k)] = apply_weights(w, u, st, c);
    }
}

EdgeValues reconstruct_edges(const Field& values, ReconstructionKind kind)
{
    if (!values.ghosts_filled()) {
        throw InvalidArgument("reconstruct_edges: ghost layer is not populated");
    }
    const Grid1D& g = values.grid();
    EdgeValues e;
    e.left.resize(static_cast<std::size_t>(g.m + 1));
    e.right.resize(static_cast<std::size_t>(g.m + 1));
    Reconstructor rec(kind);
    rec.minus(values.storage(), g.m, g.ghost, e.left);
    rec.plus(values.storage(), g.m, g.ghost, e.right);
    return e;
}

} // namespace relaxrd
