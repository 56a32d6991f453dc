#include "oracles.hpp"

#include "relaxrd/error.hpp"
#include "relaxrd/findiff.hpp"
#include "relaxrd/reconstruct.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace relaxrd {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<ReconstructionKind> all_kinds()
{
    std::vector<ReconstructionKind> k{ReconstructionKind::constant()};
    for (int r = 2; r <= 6; ++r) {
        k.push_back(ReconstructionKind::eno(r));
    }
    k.push_back(ReconstructionKind::weno(3));
    k.push_back(ReconstructionKind::weno(5));
    return k;
}

struct Edges {
    std::vector<double> minus, plus;
};

Edges reconstruct_line(ReconstructionKind kind, const std::vector<double>& line, int m, int ghost)
{
    Reconstructor rec(kind);
    Edges e{std::vector<double>(static_cast<std::size_t>(m + 1)), std::vector<double>(static_cast<std::size_t>(m + 1))};
    rec.minus(line, m, ghost, e.minus);
    rec.plus(line, m, ghost, e.plus);
    return e;
}

TEST(ReconstructionKind, ParseAndName)
{
    EXPECT_EQ(ReconstructionKind::parse("eno3"), ReconstructionKind::eno(3));
    EXPECT_EQ(ReconstructionKind::parse("weno5"), ReconstructionKind::weno(5));
    EXPECT_EQ(ReconstructionKind::parse("constant"), ReconstructionKind::constant());
    for (const auto& k : all_kinds()) {
        EXPECT_EQ(ReconstructionKind::parse(k.name()), k);
    }
}

TEST(ReconstructionKind, RejectsOrdersOutsideTheTable)
{
    try {
        (void)ReconstructionKind::parse("eno7");
        FAIL() << "eno7 accepted";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("order out of range 2..6"), std::string::npos) << e.what();
    }
    EXPECT_THROW(ReconstructionKind::eno(1), InvalidArgument);
    EXPECT_THROW(ReconstructionKind::weno(4), InvalidArgument);
    EXPECT_THROW(ReconstructionKind::weno(7), InvalidArgument);
    EXPECT_THROW(ReconstructionKind::parse("upwind"), InvalidArgument);
    EXPECT_THROW(ReconstructionKind::parse("eno"), InvalidArgument);
}

TEST(ReconstructionKind, StencilRadius)
{
    EXPECT_EQ(ReconstructionKind::constant().stencil_radius(), 0);
    for (int r = 2; r <= 6; ++r) {
        EXPECT_EQ(ReconstructionKind::eno(r).stencil_radius(), r - 1);
    }
    EXPECT_EQ(ReconstructionKind::weno(3).stencil_radius(), 2);
    EXPECT_EQ(ReconstructionKind::weno(5).stencil_radius(), 3);
}

TEST(EnoWeights, ThirdOrderMatchesShusTable)
{
    // Right-edge coefficients of the three third-order stencils.
    const double table[3][3] = {{1.0 / 3, 5.0 / 6, -1.0 / 6}, {-1.0 / 6, 5.0 / 6, 1.0 / 3}, {1.0 / 3, -7.0 / 6, 11.0 / 6}};
    for (int shift = 0; shift < 3; ++shift) {
        const auto w = Reconstructor::eno_weights(3, shift, true);
        for (int q = 0; q < 3; ++q) {
            EXPECT_NEAR(w[static_cast<std::size_t>(q)], table[shift][q], 1e-15) << shift << " " << q;
        }
    }
    // Left edge of the stencil starting at the base cell.
    const auto left = Reconstructor::eno_weights(3, 0, false);
    EXPECT_NEAR(left[0], 11.0 / 6, 1e-15);
    EXPECT_NEAR(left[1], -7.0 / 6, 1e-15);
    EXPECT_NEAR(left[2], 1.0 / 3, 1e-15);
}

TEST(EnoWeights, AllStencilsMatchPrimitiveInterpolation)
{
    for (int r = 1; r <= 6; ++r) {
        for (int shift = 0; shift < r; ++shift) {
            for (bool right : {false, true}) {
                const auto w = Reconstructor::eno_weights(r, shift, right);
                for (int q = 0; q < r; ++q) {
                    std::vector<double> unit(static_cast<std::size_t>(r), 0.0);
                    unit[static_cast<std::size_t>(q)] = 1.0;
                    const double expected = oracle::stencil_reconstruction(unit, 0, r, shift + (right ? 1 : 0));
                    EXPECT_NEAR(w[static_cast<std::size_t>(q)], expected, 1e-13) << r << " " << shift << " " << q;
                }
            }
        }
    }
    EXPECT_THROW(Reconstructor::eno_weights(7, 0, true), InvalidArgument);
    EXPECT_THROW(Reconstructor::eno_weights(3, 3, true), InvalidArgument);
}

TEST(Reconstruct, ConstantDataIsReturnedExactly)
{
    for (const auto& kind : all_kinds()) {
        const int m = 10;
        const int g = kind.required_ghosts();
        const std::vector<double> line(static_cast<std::size_t>(m + 2 * g), 0.3);
        const Edges e = reconstruct_line(kind, line, m, g);
        for (int k = 0; k <= m; ++k) {
            EXPECT_EQ(e.minus[static_cast<std::size_t>(k)], 0.3) << kind.name();
            EXPECT_EQ(e.plus[static_cast<std::size_t>(k)], 0.3) << kind.name();
        }
    }
}

TEST(Reconstruct, LinearDataGivesInterfaceCoordinates)
{
    const Grid1D g = make_grid(0.0, 1.0, 16, 2);
    Field u = sample(g, [](double x) { return x; });
    fill_ghosts(u, BoundaryPair::dirichlet(0.0, 1.0), 2);
    const EdgeValues e = reconstruct_edges(u, ReconstructionKind::eno(2));
    ASSERT_EQ(e.left.size(), 17u);
    ASSERT_EQ(e.right.size(), 17u);
    for (int k = 0; k <= 16; ++k) {
        EXPECT_NEAR(e.left[static_cast<std::size_t>(k)], g.interface(k), 4 * oracle::kEps) << k;
        EXPECT_NEAR(e.right[static_cast<std::size_t>(k)], g.interface(k), 4 * oracle::kEps) << k;
    }
}

TEST(Reconstruct, ConstantKindPicksNeighbouringCells)
{
    const Grid1D g = make_grid(0.0, 1.0, 6, 1);
    Field u = sample(g, [](double x) { return x * x; });
    fill_ghosts(u, BoundaryPair::periodic(), 2);
    const EdgeValues e = reconstruct_edges(u, ReconstructionKind::constant());
    for (int k = 0; k <= 6; ++k) {
        EXPECT_EQ(e.left[static_cast<std::size_t>(k)], u.at(k));
        EXPECT_EQ(e.right[static_cast<std::size_t>(k)], u.at(k + 1));
    }
}

TEST(Reconstruct, RejectsUnpopulatedGhosts)
{
    Field u(make_grid(0.0, 1.0, 8, 3));
    EXPECT_THROW(reconstruct_edges(u, ReconstructionKind::eno(3)), InvalidArgument);
    Field thin(make_grid(0.0, 1.0, 8, 1));
    fill_ghosts(thin, BoundaryPair::periodic(), 2);
    EXPECT_THROW(reconstruct_edges(thin, ReconstructionKind::eno(3)), InvalidArgument);
}

TEST(Reconstruct, TiesExtendUpwind)
{
    // Cells k-1, k, k+1 hold 1, 0, 1: both first differences have size 1.
    const int m = 3;
    const int g = 2;
    const std::vector<double> line{1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0};
    const Edges e = reconstruct_line(ReconstructionKind::eno(2), line, m, g);
    // u^- at the right edge of cell 2 uses cells {1, 2}: 0 + (0 - 1)/2.
    EXPECT_DOUBLE_EQ(e.minus[2], -0.5);
    // u^+ at the left edge of cell 2 uses cells {2, 3}: 0 - (1 - 0)/2.
    EXPECT_DOUBLE_EQ(e.plus[1], -0.5);
}

TEST(Reconstruct, EnoSelectionInvariantUnderShiftAndScale)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    for (int r = 2; r <= 6; ++r) {
        const auto kind = ReconstructionKind::eno(r);
        const int m = 16;
        const int g = kind.required_ghosts();
        std::vector<double> line(static_cast<std::size_t>(m + 2 * g));
        for (double& v : line) {
            v = noise(rng);
        }
        const Edges base = reconstruct_line(kind, line, m, g);
        for (const auto& [scale, shift] : {std::pair{3.0, 0.0}, std::pair{1.0, 10.0}, std::pair{0.01, -2.5}}) {
            std::vector<double> moved = line;
            for (double& v : moved) {
                v = scale * v + shift;
            }
            const Edges e = reconstruct_line(kind, moved, m, g);
            for (int k = 0; k <= m; ++k) {
                const auto kk = static_cast<std::size_t>(k);
                const double tol = 1e-12 * (std::fabs(shift) + scale * 10.0);
                EXPECT_NEAR(e.minus[kk], scale * base.minus[kk] + shift, tol) << r << " " << k;
                EXPECT_NEAR(e.plus[kk], scale * base.plus[kk] + shift, tol) << r << " " << k;
            }
        }
    }
}

TEST(Reconstruct, SmoothDataConvergesAtDesignOrder)
{
    // Cell averages of sin(2 pi x) on a periodic grid; edge error vs exact.
    auto edge_error = [](ReconstructionKind kind, int m) {
        const Grid1D g = make_grid(0.0, 1.0, m, kind.required_ghosts());
        std::vector<double> line(static_cast<std::size_t>(g.total()));
        for (int j = 1 - g.ghost; j <= m + g.ghost; ++j) {
            const double lo = g.interface(j - 1);
            const double hi = g.interface(j);
            line[static_cast<std::size_t>(g.offset(j))] =
                (std::cos(2 * kPi * lo) - std::cos(2 * kPi * hi)) / (2 * kPi * g.h);
        }
        const Edges e = reconstruct_line(kind, line, m, g.ghost);
        double err = 0.0;
        for (int k = 0; k <= m; ++k) {
            err = std::max(err, std::fabs(e.minus[static_cast<std::size_t>(k)] - std::sin(2 * kPi * g.interface(k))));
        }
        return err;
    };
    for (const auto& kind : all_kinds()) {
        const double rate = std::log2(edge_error(kind, 40) / edge_error(kind, 80));
        // ENO stencils switch at extrema and WENO3 degrades there; take the
        // formal order minus one as the floor.
        EXPECT_GT(rate, kind.order - 1.0) << kind.name() << " rate " << rate;
    }
}

TEST(WenoWeights, EqualIndicatorsGiveLinearWeights)
{
    const std::vector<double> beta{0.2, 0.2, 0.2};
    const std::vector<double> d{0.1, 0.6, 0.3};
    const auto w = weno_weights(beta, d);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(w[k], d[k], 1e-15);
    }
}

TEST(WenoWeights, HugeIndicatorSuppressesItsStencil)
{
    const std::vector<double> beta{1e30, 0.0, 0.0};
    const std::vector<double> d{0.1, 0.6, 0.3};
    const auto w = weno_weights(beta, d);
    EXPECT_LT(w[0], 1e-60);
    EXPECT_NEAR(w[1], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(w[2], 1.0 / 3.0, 1e-15);
}

TEST(WenoWeights, NonNegativeAndNormalised)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> beta(3), d(3);
        double sum = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            beta[k] = std::pow(10.0, -12.0 + 14.0 * u(rng));
            d[k] = 0.05 + u(rng);
            sum += d[k];
        }
        for (double& x : d) {
            x /= sum;
        }
        const auto w = weno_weights(beta, d);
        double total = 0.0;
        for (double x : w) {
            EXPECT_GE(x, 0.0);
            total += x;
        }
        EXPECT_NEAR(total, 1.0, 4 * oracle::kEps);
    }
    EXPECT_THROW(weno_weights(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5}), InvalidArgument);
}

TEST(WenoWeights, SmoothSineStaysNearLinearWeights)
{
    // Jiang-Shu indicators of the three WENO5 stencils, left to right.
    const double h = 1.0 / 100.0;
    const std::vector<double> d{0.1, 0.6, 0.3};
    for (int i = 2; i < 98; ++i) {
        std::vector<double> f(5);
        for (int q = 0; q < 5; ++q) {
            f[static_cast<std::size_t>(q)] = std::sin(2 * kPi * (i + q - 2 + 0.5) * h);
        }
        const double b0 = 13.0 / 12 * std::pow(f[0] - 2 * f[1] + f[2], 2) + 0.25 * std::pow(f[0] - 4 * f[1] + 3 * f[2], 2);
        const double b1 = 13.0 / 12 * std::pow(f[1] - 2 * f[2] + f[3], 2) + 0.25 * std::pow(f[1] - f[3], 2);
        const double b2 = 13.0 / 12 * std::pow(f[2] - 2 * f[3] + f[4], 2) + 0.25 * std::pow(3 * f[2] - 4 * f[3] + f[4], 2);
        const auto w = weno_weights(std::vector<double>{b0, b1, b2}, d);
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_NEAR(w[k], d[k], 1e-2) << "cell " << i << " stencil " << k;
        }
    }
}

} // namespace
} // namespace relaxrd
