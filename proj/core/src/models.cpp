#include "relaxrd/models.hpp"

#include "relaxrd/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace relaxrd {

void Problem::validate() const
{
    if (dim != 1 && dim != 2) {
        throw InvalidArgument("problem dimension must be 1 or 2");
    }
    if (unknowns.empty()) {
        throw InvalidArgument("problem has no unknowns");
    }
    if (!initial) {
        throw InvalidArgument("problem has no initial data");
    }
    for (const auto& u : unknowns) {
        if (!(u.D >= 0.0)) {
            throw InvalidArgument("diffusivity coefficient of '" + u.name + "' is negative");
        }
    }
    if (!(x_domain[1] > x_domain[0]) || (dim == 2 && !(y_domain[1] > y_domain[0]))) {
        throw InvalidArgument("empty problem domain");
    }
    bc_x.validate();
    if (dim == 2) {
        bc_y.validate();
    }
    if (advection) {
        if (advection->carrier >= count() || advection->potential >= count()) {
            throw InvalidArgument("extra advection refers to a missing unknown");
        }
        if (!unknowns[advection->carrier].diffusive()) {
            throw InvalidArgument("extra advection carrier must be a diffusive unknown");
        }
    }
    if (reaction) {
        std::vector<double> zero(count(), 0.0);
        std::vector<double> rate(count(), 0.0);
        reaction(zero, rate);
        for (double r : rate) {
            if (!std::isfinite(r)) {
                throw InvalidArgument("reaction is not finite at the zero state");
            }
        }
    }
}

double heat_exact(double t, double x)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return std::exp(-two_pi * two_pi * t) * std::sin(two_pi * x);
}

Problem heat_problem()
{
    Problem p;
    p.name = "heat";
    p.unknowns.push_back({"u", 1.0, [](std::span<const double>) { return 1.0; }});
    p.initial = [](std::size_t, double x, double) { return heat_exact(0.0, x); };
    p.x_domain = {0.0, 1.0};
    p.bc_x = BoundaryPair::periodic();
    p.exact = [](double t, double x, double) { return heat_exact(t, x); };
    return p;
}

double genfk_speed(double alpha)
{
    if (!(alpha > 0.0)) {
        throw InvalidArgument("travelling wave needs alpha > 0");
    }
    return 1.0 / std::sqrt(1.0 + alpha);
}

double genfk_exact(double t, double x, double alpha)
{
    const double c = genfk_speed(alpha);
    const double base = 1.0 - std::exp(alpha * (x - c * t) / std::sqrt(1.0 + alpha));
    if (base <= 0.0) {
        return 0.0;
    }
    return std::pow(base, 1.0 / alpha);
}

Problem genfk_problem(double p_exp, double q_exp, double m_exp)
{
    if (!(p_exp > 0.0) || !(q_exp > 0.0) || !(m_exp > 0.0)) {
        throw InvalidArgument("generalised Fisher-Kolmogoroff exponents must be positive");
    }
    Problem p;
    p.name = "genfk";
    p.unknowns.push_back({"u", 1.0, [m_exp](std::span<const double> u) {
                              return std::pow(std::max(u[0], 0.0), m_exp);
                          }});
    p.reaction = [p_exp, q_exp](std::span<const double> u, std::span<double> rate) {
        const double w = std::max(u[0], 0.0);
        rate[0] = std::pow(w, p_exp) * (1.0 - std::pow(w, q_exp));
    };
    p.x_domain = {-5.0, 5.0};
    const bool travelling = p_exp == 1.0 && q_exp == m_exp;
    if (travelling) {
        const double alpha = m_exp;
        const double a = p.x_domain[0];
        const double b = p.x_domain[1];
        p.initial = [alpha](std::size_t, double x, double) { return genfk_exact(0.0, x, alpha); };
        p.exact = [alpha](double t, double x, double) { return genfk_exact(t, x, alpha); };
        p.bc_x = {BoundaryCondition::dirichlet([alpha, a](double t) { return genfk_exact(t, a, alpha); }),
                  BoundaryCondition::dirichlet([alpha, b](double t) { return genfk_exact(t, b, alpha); })};
    } else {
        p.initial = [](std::size_t, double x, double) { return x < 0.0 ? 1.0 : 0.0; };
        p.bc_x = BoundaryPair::dirichlet(1.0, 0.0);
    }
    return p;
}

double ExtinctionShape::operator()(double x, double y) const
{
    const double s = (std::hypot(x, y) - radius) / half_width;
    const double bump = std::max(0.0, 1.0 - s * s);
    if (bump == 0.0) {
        return 0.0;
    }
    return bump * (1.0 + perturbation * std::cos(2.0 * std::atan2(y, x)));
}

Problem extinction_problem(double m_exp, double p_exp, double c_abs, ExtinctionShape shape)
{
    if (!(m_exp > 1.0) || !(p_exp > 0.0 && p_exp < 1.0) || !(c_abs > 0.0)) {
        throw InvalidArgument("extinction regime needs m > 1, 0 < p < 1 and c > 0");
    }
    if (!(shape.radius > 0.0) || !(shape.half_width > 0.0) || !(shape.perturbation >= 0.0 && shape.perturbation < 1.0)) {
        throw InvalidArgument("extinction initial shape needs positive radius and width and perturbation in [0, 1)");
    }
    Problem p;
    p.name = "extinction";
    p.dim = 2;
    // Laplacian(u^m) = div(m u^(m-1) grad u).
    p.unknowns.push_back({"u", 1.0, [m_exp](std::span<const double> u) {
                              return m_exp * std::pow(std::max(u[0], 0.0), m_exp - 1.0);
                          }});
    p.reaction = [p_exp, c_abs](std::span<const double> u, std::span<double> rate) {
        rate[0] = u[0] > 0.0 ? -c_abs * std::pow(u[0], p_exp) : 0.0;
    };
    p.initial = [shape](std::size_t, double x, double y) { return shape(x, y); };
    p.x_domain = {-2.0, 2.0};
    p.y_domain = {-2.0, 2.0};
    p.bc_x = BoundaryPair::dirichlet(0.0, 0.0);
    p.bc_y = BoundaryPair::dirichlet(0.0, 0.0);
    return p;
}

void FrogParameters::validate() const
{
    if (!(mu > 0.0) || !(alpha > 0.0) || !(beta > 0.0) || !(gamma >= 0.0) || !(u0 > 0.0)
        || !(threshold > 0.0) || !(half_width > 0.0)) {
        throw InvalidArgument("frog parameters must be positive (gamma non-negative)");
    }
}

double frog_chi(double x) { return x > 0.0 ? 1.0 : 0.0; }

double frog_settling(const FrogParameters& p, double total_density, double /*pheromone*/)
{
    return frog_chi(1.0 - total_density / p.threshold);
}

double frog_release_profile(double x) { return 2.5 * std::exp(-100.0 * x * x); }

Problem frog_problem(const FrogParameters& params, double release_time,
                     std::function<double(double)> release_profile)
{
    params.validate();
    if (!(release_time >= 0.0)) {
        throw InvalidArgument("release time must be non-negative");
    }
    const FrogParameters fp = params;
    Problem p;
    p.name = "frog";
    const double u0 = fp.u0;
    p.unknowns = {
        {"u_m", fp.mu, [u0](std::span<const double> s) {
             return std::max(0.0, s[kMigratingU] + s[kSettledU]) / u0;
         }},
        {"u_s", 0.0, {}},
        {"c_u", fp.alpha, [](std::span<const double>) { return 1.0; }},
        {"v_m", fp.mu, [u0](std::span<const double> s) {
             return std::max(0.0, s[kMigratingV] + s[kSettledV]) / u0;
         }},
        {"v_s", 0.0, {}},
    };
    p.reaction = [fp](std::span<const double> s, std::span<double> rate) {
        const double su = frog_settling(fp, s[kMigratingU] + s[kSettledU], s[kPheromone]);
        const double sv = frog_settling(fp, s[kSettledU] + s[kMigratingV] + s[kSettledV], s[kPheromone]);
        rate[kMigratingU] = -su * s[kMigratingU];
        rate[kSettledU] = su * s[kMigratingU];
        rate[kPheromone] = fp.beta * (s[kMigratingU] + s[kSettledU] - s[kPheromone]);
        rate[kMigratingV] = -sv * s[kMigratingV];
        rate[kSettledV] = sv * s[kMigratingV];
    };
    // Settling transfers have rate at most 1; the pheromone row sums to 3 beta.
    const double bound = std::max(2.0, 3.0 * fp.beta);
    p.reaction_rate_bound = [bound](std::span<const double>) { return bound; };
    if (fp.gamma != 0.0) {
        p.advection = ExtraAdvection{fp.gamma, kMigratingV, kPheromone};
    }
    p.initial = [](std::size_t k, double x, double) { return k == kMigratingU ? frog_release_profile(x) : 0.0; };
    p.x_domain = {-fp.half_width, fp.half_width};
    p.bc_x = BoundaryPair::free_flow();
    p.events.push_back({release_time, [profile = std::move(release_profile)](std::size_t k, double x, double) {
                            return k == kMigratingV ? profile(x) : 0.0;
                        }});
    return p;
}

} // namespace relaxrd
