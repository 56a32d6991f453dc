#include "config.hpp"
#include "oracles.hpp"

#include "relaxrd/error.hpp"
#include "relaxrd/harness.hpp"
#include "relaxrd/models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

namespace relaxrd {
namespace {

constexpr double kPi = std::numbers::pi;

struct Study {
    Problem problem;
    SchemeConfig scheme;
    cli::RunConfig cfg;
};

Study load(const std::string& file)
{
    auto cfg = cli::load_config(std::string(RELAXRD_CONFIG_DIR) + "/" + file);
    return {cli::build_problem(cfg), cli::build_scheme(cfg), cfg};
}

Problem scalar(std::function<double(double)> A, std::function<double(double)> g)
{
    Problem p;
    p.name = "scalar";
    Unknown u{"u", 1.0, {}};
    if (A) {
        u.A = [A](std::span<const double> q) { return A(q[0]); };
    }
    p.unknowns = {u};
    if (g) {
        p.reaction = [g](std::span<const double> q, std::span<double> r) { r[0] = g(q[0]); };
    }
    p.initial = [](std::size_t, double x, double) { return 1.0 + 0.5 * std::sin(2 * kPi * x); };
    return p;
}

TEST(ErrorNorm, IdenticalFieldsGiveZero)
{
    const Field f = sample(make_grid(0.0, 1.0, 50, 2), [](double x) { return std::exp(x); });
    EXPECT_EQ(error_norm(f, f, Norm::L1), 0.0);
    EXPECT_EQ(error_norm(f, f, Norm::L2), 0.0);
}

TEST(ErrorNorm, UnitErrorOnUnitInterval)
{
    const Grid1D g = make_grid(0.0, 1.0, 37, 0);
    EXPECT_NEAR(error_norm(Field(g, 1.0), Field(g, 0.0), Norm::L1), 1.0, 1e-14);
    EXPECT_NEAR(error_norm(Field(g, 1.0), Field(g, 0.0), Norm::L2), 1.0, 1e-14);
}

TEST(ErrorNorm, SineIntegrals)
{
    const Grid1D g = make_grid(0.0, 1.0, 972, 0);
    const Field e = sample(g, [](double x) { return std::sin(2 * kPi * x); });
    const Field zero(g, 0.0);
    EXPECT_NEAR(error_norm(e, zero, Norm::L1), 2.0 / kPi, 1e-4);
    EXPECT_NEAR(error_norm(e, zero, Norm::L2), 1.0 / std::sqrt(2.0), 1e-4);
}

TEST(ErrorNorm, TwoDimensionalUsesCellArea)
{
    const Grid2D g = make_grid2d(-2.0, 2.0, 16, -1.0, 1.0, 8, 0);
    Field2D a(g), b(g);
    for (int j = 1; j <= 8; ++j) {
        for (int i = 1; i <= 16; ++i) {
            a.ref(i, j) = 1.0;
        }
    }
    EXPECT_NEAR(error_norm(a, b, Norm::L1), 8.0, 1e-13);
    EXPECT_NEAR(error_norm(a, b, Norm::L2), std::sqrt(8.0), 1e-13);
}

TEST(ErrorNorm, IsANormOnRandomFields)
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> scale(-5.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 8 + trial % 40;
        const auto x = oracle::random_periodic(rng, m, 0.0, 1.0);
        const auto y = oracle::random_periodic(rng, m, 0.3, 2.0);
        const std::vector<double> zero(static_cast<std::size_t>(m), 0.0);
        const double h = 1.0 / m;
        const double c = scale(rng);
        std::vector<double> cx(x), xy(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            cx[i] = c * x[i];
            xy[i] = x[i] + y[i];
        }
        for (Norm n : {Norm::L1, Norm::L2}) {
            const double nx = error_norm(x, zero, h, n);
            const double ny = error_norm(y, zero, h, n);
            EXPECT_GE(nx, 0.0);
            EXPECT_NEAR(error_norm(cx, zero, h, n), std::fabs(c) * nx, 1e-13 * (1.0 + std::fabs(c) * nx));
            EXPECT_LE(error_norm(xy, zero, h, n), nx + ny + 1e-14);
            EXPECT_NEAR(error_norm(x, y, h, n), error_norm(y, x, h, n), 1e-15);
        }
    }
}

TEST(ErrorNorm, RejectsMismatchedGrids)
{
    EXPECT_THROW(error_norm(Field(make_grid(0.0, 1.0, 10, 0)), Field(make_grid(0.0, 1.0, 11, 0)), Norm::L1),
                 InvalidArgument);
    EXPECT_THROW(error_norm(Field(make_grid(0.0, 1.0, 10, 0)), Field(make_grid(0.0, 2.0, 10, 0)), Norm::L1),
                 InvalidArgument);
    const std::vector<double> a(3), b(4);
    EXPECT_THROW(error_norm(a, b, 1.0, Norm::L2), InvalidArgument);
}

TEST(ConvergenceRates, Definition)
{
    const std::vector<double> e{1e-2, 1e-3};
    const auto r = convergence_rates(e, 10.0);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_FALSE(r[0].has_value());
    EXPECT_NEAR(*r[1], 1.0, 1e-14);
    const std::vector<double> e3{1.0, 1.0 / 9.0, 1.0 / 729.0};
    const auto r3 = convergence_rates(e3, 3.0);
    EXPECT_NEAR(*r3[1], 2.0, 1e-14);
    EXPECT_NEAR(*r3[2], 4.0, 1e-14);
    EXPECT_THROW(convergence_rates(e, 1.0), InvalidArgument);
}

TEST(RunReport, AverageAndFinalRates)
{
    RunReport rep;
    rep.refinement = 2;
    for (auto [m, e] : {std::pair{30, 0.16}, std::pair{60, 0.04}, std::pair{120, 0.02}}) {
        ReportRow row;
        row.m = m;
        row.error_l1 = row.error_l2 = e;
        rep.rows.push_back(row);
    }
    EXPECT_NEAR(rep.average_rate(Norm::L2), 1.5, 1e-14);
    EXPECT_NEAR(rep.final_rate(Norm::L1), 1.0, 1e-14);
    rep.rows.resize(1);
    EXPECT_THROW(rep.average_rate(Norm::L1), InvalidArgument);
}

TEST(ConvergenceStudy, HeatEno3RateFromTheTwoFinestGrids)
{
    const Study s = load("table1_eno3.cfg");
    const RunReport rep = convergence_study(s.problem, s.scheme, {324, 972}, 0.01, Reference::exact());
    ASSERT_EQ(rep.rows.size(), 2u);
    EXPECT_EQ(rep.refinement, 3);
    EXPECT_EQ(rep.rows[0].m, 324);
    EXPECT_GE(*rep.rows[1].rate_l1, 2.7);
    EXPECT_LE(*rep.rows[1].rate_l1, 3.3);
    EXPECT_GE(rep.rows[1].wall_time, 0.0);
}

TEST(ConvergenceStudy, TravellingWaveRate)
{
    const Study s = load("table2_alpha2.cfg");
    const RunReport rep = convergence_study(s.problem, s.scheme, {240, 480}, 5.0, Reference::exact(), 2);
    EXPECT_GE(std::fabs(*rep.rows[1].rate_l2), 1.0);
    EXPECT_LE(std::fabs(*rep.rows[1].rate_l2), 2.1);
}

TEST(ConvergenceStudy, FineGridAndExactReferencesAgree)
{
    const Study exact = load("table1_eno3.cfg");
    const Study fine = load("table1_eno3_fine.cfg");
    ASSERT_EQ(fine.cfg.reference, Reference::fine_grid(2916));
    // The shipped 2916-cell reference takes minutes; one level of nesting exercises the same path.
    const std::vector<int> ms{12, 36, 108};
    const RunReport a = convergence_study(exact.problem, exact.scheme, ms, 0.01, Reference::exact(), 3);
    const RunReport b = convergence_study(fine.problem, fine.scheme, ms, 0.01, Reference::fine_grid(324), 3);
    for (std::size_t k = 1; k < ms.size(); ++k) {
        EXPECT_NEAR(*a.rows[k].rate_l1, *b.rows[k].rate_l1, 0.2) << ms[k];
    }
}

TEST(ConvergenceStudy, ThreadCountDoesNotChangeResults)
{
    const Study s = load("table1_weno5.cfg");
    const std::vector<int> ms{12, 36, 108};
    const RunReport one = convergence_study(s.problem, s.scheme, ms, 0.01, Reference::exact(), 1);
    const RunReport many = convergence_study(s.problem, s.scheme, ms, 0.01, Reference::exact(), 3);
    for (std::size_t k = 0; k < ms.size(); ++k) {
        EXPECT_EQ(one.rows[k].m, many.rows[k].m);
        EXPECT_EQ(one.rows[k].error_l1, many.rows[k].error_l1);
        EXPECT_EQ(one.rows[k].error_l2, many.rows[k].error_l2);
    }
}

TEST(ConvergenceStudy, RejectsInvalidGrids)
{
    const Study s = load("table1_eno3.cfg");
    const auto study = [&](std::vector<int> ms, Reference r = Reference::exact()) {
        return convergence_study(s.problem, s.scheme, ms, 0.01, r);
    };
    EXPECT_THROW(study({12}), InvalidArgument);
    EXPECT_THROW(study({12, 30}), InvalidArgument);
    EXPECT_THROW(study({12, 36, 72}), InvalidArgument);
    EXPECT_THROW(study({36, 12}), InvalidArgument);
    EXPECT_THROW(study({12, 36}, Reference::fine_grid(72)), InvalidArgument);
    EXPECT_THROW(study({12, 36}, Reference::fine_grid(36)), InvalidArgument);
    EXPECT_THROW(convergence_study(genfk_problem(2.0, 1.0, 1.0), s.scheme, {12, 36}, 0.1, Reference::exact()),
                 InvalidArgument);
    EXPECT_THROW(convergence_study(extinction_problem(), s.scheme, {12, 36}, 0.1, Reference::exact()),
                 InvalidArgument);
}

TEST(ConvergenceStudy, FaultsPropagate)
{
    Problem p = heat_problem();
    p.reaction = [](std::span<const double> u, std::span<double> r) { r[0] = u[0] > 0.9 ? NAN : 0.0; };
    p.reaction_rate_bound = [](std::span<const double>) { return 1.0; };
    EXPECT_THROW(convergence_study(p, SchemeConfig::make(ReconstructionKind::eno(2), 1), {12, 36}, 0.01,
                                   Reference::exact()),
                 RunFault);
}

// Final-column rates of Table 1.
const std::map<std::string, double> kTableOneRates{
    {"table1_eno2.cfg", 2.3127}, {"table1_eno3.cfg", 2.997},   {"table1_eno4.cfg", 4.2522},
    {"table1_eno5.cfg", 4.9011}, {"table1_eno6.cfg", 5.8222},  {"table1_weno3.cfg", 2.8504},
    {"table1_weno5.cfg", 5.8847},
};

TEST(ConvergenceStudy, TableOneFinestPairRates)
{
    for (const auto& [file, paper] : kTableOneRates) {
        const Study s = load(file);
        const RunReport rep = convergence_study(s.problem, s.scheme, s.cfg.m_list, s.cfg.t_end, Reference::exact(), 4);
        const double rate = rep.final_rate(Norm::L1);
        std::printf("%-18s finest-pair rate %.4f (table %.4f)\n", file.c_str(), rate, paper);
        EXPECT_NEAR(rate, paper, 0.6) << file;
    }
}

TEST(OracleCompare, IdentityWhenNothingHappens)
{
    const Problem p = scalar({}, {});
    EXPECT_EQ(oracle_compare(p, 16, 3, PhiPolicy::fixed(1.0)), 0.0);
    EXPECT_EQ(oracle_compare(p, 16, 0), 0.0);
}

TEST(OracleCompare, ReactionOnlyIsForwardEuler)
{
    const Problem p = scalar({}, [](double u) { return u; });
    EXPECT_LE(oracle_compare(p, 16, 1, PhiPolicy::fixed(1.0)), 10 * oracle::kEps * 1.5);
}

TEST(OracleCompare, LinearDiffusionOneStep)
{
    // Central-gradient relaxation plus upwind viscosity against the three-point Laplacian:
    // the gap is one step of (phi h / 2) u_xx - (h^2 / 4) u_xxxx, far below the data scale.
    const Problem p = scalar([](double) { return 1.0; }, {});
    const double gap = oracle_compare(p, 16, 1);
    const double h = 1.0 / 16;
    const double dt = 0.25 * h * h;
    const double phi = std::sqrt(1.0 / dt);
    const double bound = dt * (0.5 * phi * h * 0.5 * 4 * kPi * kPi + 0.25 * h * h * 0.5 * std::pow(2 * kPi, 4));
    EXPECT_GT(gap, 0.0);
    EXPECT_LE(gap, bound);
    EXPECT_THROW(oracle_compare(p, 16, -1), InvalidArgument);
    EXPECT_THROW(oracle_compare(extinction_problem(), 16, 1), InvalidArgument);
}

TEST(Diagnostics, MassAndVariation)
{
    const std::vector<double> v{0.0, 1.0, 3.0, 2.0, 2.0, 0.0};
    EXPECT_DOUBLE_EQ(total_mass(v, 0.5), 4.0);
    EXPECT_DOUBLE_EQ(total_variation(v), 6.0);
    EXPECT_EQ(total_variation(std::vector<double>{}), 0.0);
    EXPECT_EQ(total_variation(std::vector<double>(5, 1.0)), 0.0);
}

TEST(Diagnostics, SupportEdge)
{
    const Grid1D g = make_grid(-5.0, 5.0, 10, 0);
    std::vector<double> v(10, 0.0);
    EXPECT_EQ(support_right_edge(v, g, 1e-8), -5.0);
    v[0] = v[1] = v[2] = 0.5;
    v[3] = 1e-10;
    EXPECT_DOUBLE_EQ(support_right_edge(v, g, 1e-8), -2.0);
    v[9] = 1.0;
    EXPECT_DOUBLE_EQ(support_right_edge(v, g, 1e-8), 5.0);
}

TEST(Diagnostics, AngularMode)
{
    Problem p = extinction_problem();
    const SchemeConfig cfg = SchemeConfig::make(ReconstructionKind::eno(2), 1);
    const Mesh mesh = Mesh::make(p, cfg, 64, 64);
    auto field = [&mesh](const std::function<double(double, double)>& f) {
        std::vector<double> v;
        for (int j = 1; j <= mesh.y.m; ++j) {
            for (int i = 1; i <= mesh.x.m; ++i) {
                v.push_back(f(mesh.x.center(i), mesh.y.center(j)));
            }
        }
        return v;
    };
    // Radial data has no second mode (the square grid is symmetric under quarter turns).
    const auto radial = field([](double x, double y) { return std::max(0.0, 1.0 - x * x - y * y); });
    EXPECT_LT(angular_mode_ratio(radial, mesh, 2), 1e-13);
    // u = f(r) (1 + e cos 2 theta) carries e / 2 in its second mode.
    const auto bumped = field([](double x, double y) {
        const double r2 = x * x + y * y;
        return std::max(0.0, 1.0 - r2) * (1.0 + 0.2 * std::cos(2 * std::atan2(y, x)));
    });
    EXPECT_NEAR(angular_mode_ratio(bumped, mesh, 2), 0.1, 2e-3);
    EXPECT_EQ(angular_mode_ratio(std::vector<double>(64 * 64, 0.0), mesh, 2), 0.0);
    EXPECT_THROW(angular_mode_ratio(radial, Mesh::make(heat_problem(), cfg, 16), 2), InvalidArgument);
}

} // namespace
} // namespace relaxrd
