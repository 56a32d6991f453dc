#pragma once

#include "relaxrd/problem.hpp"

#include <functional>

namespace relaxrd {

/// u_t = u_xx on [0, 1], periodic, u0 = sin(2 pi x).
Problem heat_problem();
double heat_exact(double t, double x);

/// u_t = (u^m u_x)_x + u^p (1 - u^q) on [-5, 5].
///
/// For p = 1 and q = m = alpha the travelling wave is attached as the exact
/// solution and used for the initial data and the Dirichlet ends; otherwise
/// the ends are pinned to 1 and 0 and u0 is a unit step at x = 0.
Problem genfk_problem(double p_exp, double q_exp, double m_exp);
double genfk_speed(double alpha);
double genfk_exact(double t, double x, double alpha);

/// Initial datum of the extinction test: a parabolic ring profile around
/// r = radius with amplitude modulated by 1 + perturbation cos(2 theta).
struct ExtinctionShape {
    double radius = 1.0;
    double half_width = 0.3;
    double perturbation = 0.1;

    double operator()(double x, double y) const;
};

/// u_t = Laplacian(u^m) - c u^p on [-2, 2]^2 in nonconservative form.
Problem extinction_problem(double m_exp = 2.0, double p_exp = 0.5, double c_abs = 1.0,
                           ExtinctionShape shape = {});

struct FrogParameters {
    double mu = 1.0;
    double gamma = 0.0;
    double alpha = 0.01;
    double beta = 10.0;
    /// Density scale in D(u) = u / u0.
    double u0 = 0.25;
    /// Settling stops once the local density reaches this value.
    double threshold = 0.25;
    double half_width = 4.0;

    void validate() const;
};

/// chi(x) = 1 for x > 0, else 0.
double frog_chi(double x);
/// Settling rate S(u) = chi(1 - u / threshold). The pheromone argument is unused.
double frog_settling(const FrogParameters& p, double total_density, double pheromone = 0.0);
double frog_release_profile(double x);

enum FrogField : std::size_t { kMigratingU = 0, kSettledU, kPheromone, kMigratingV, kSettledV };

/// Five-unknown dispersal/settling system (u_m, u_s, c_u, v_m, v_s) with
/// free-flow ends; at `release_time` the profile is added to v_m.
Problem frog_problem(const FrogParameters& params, double release_time = 5.0,
                     std::function<double(double)> release_profile = frog_release_profile);

} // namespace relaxrd
