#include "relaxrd/relax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace relaxrd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_scalar(const Problem& p, const char* who)
{
    if (p.count() != 1) {
        throw InvalidArgument(std::string(who) + " works on scalar problems");
    }
}

} // namespace

Tableau Tableau::rk1() { return {"rk1", 1, 1, {0.0}, {1.0}, {0.0}}; }

Tableau Tableau::rk2() { return {"rk2", 2, 2, {0.0, 0.0, 1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}}; }

Tableau Tableau::rk3()
{
    return {"rk3", 3, 3, {0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.25, 0.25, 0.0}, {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
            {0.0, 1.0, 0.5}};
}

Tableau Tableau::of_order(int order)
{
    switch (order) {
    case 1:
        return rk1();
    case 2:
        return rk2();
    case 3:
        return rk3();
    default:
        throw InvalidArgument("Runge-Kutta order must be 1, 2 or 3, got " + std::to_string(order));
    }
}

SchemeConfig SchemeConfig::make(ReconstructionKind reconstruction, int rk_order)
{
    SchemeConfig cfg;
    cfg.reconstruction = reconstruction;
    cfg.tableau = Tableau::of_order(rk_order);
    cfg.gradient_order = 2 * rk_order;
    return cfg;
}

int SchemeConfig::ghost_cells() const
{
    return std::max(reconstruction.required_ghosts(), gradient_order / 2);
}

void SchemeConfig::validate() const
{
    if (!supported_gradient_order(gradient_order)) {
        throw InvalidArgument("gradient order must be 2, 4 or 6");
    }
    if (gradient_order < 2 * tableau.order) {
        throw InvalidArgument("gradient order " + std::to_string(gradient_order) + " is below 2x the RK order "
                              + std::to_string(tableau.order));
    }
    if (!(cfl_parabolic > 0.0)) {
        throw InvalidArgument("parabolic CFL constant must be positive");
    }
    if (!(phi.value > 0.0)) {
        throw InvalidArgument(phi.kind == PhiPolicy::Kind::Fixed ? "fixed phi must be positive"
                                                                 : "phi safety factor must be positive");
    }
    const auto sum = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) {
            s += x;
        }
        return s;
    };
    if (std::fabs(sum(tableau.b) - 1.0) > 1e-14) {
        throw InvalidArgument("tableau weights do not sum to one");
    }
}

Mesh Mesh::make(const Problem& problem, const SchemeConfig& cfg, int mx, int my)
{
    Mesh mesh;
    mesh.dim = problem.dim;
    const int g = cfg.ghost_cells();
    mesh.x = make_grid(problem.x_domain[0], problem.x_domain[1], mx, g);
    if (problem.dim == 2) {
        mesh.y = make_grid(problem.y_domain[0], problem.y_domain[1], my > 0 ? my : mx, g);
    }
    return mesh;
}

Field relaxation_step(const Field& u, const Problem& problem, int order)
{
    require_scalar(problem, "relaxation_step");
    Field v = gradient(u, order);
    const Unknown& unk = problem.unknowns[0];
    auto in = u.storage();
    auto out = v.storage_mut();
    for (std::size_t s = 0; s < out.size(); ++s) {
        const double a = unk.diffusive() ? unk.D * unk.A(in.subspan(s, 1)) : 0.0;
        out[s] = -a * out[s];
    }
    v.mark_ghosts_filled(u.ghost_bc());
    return v;
}

std::pair<Field, Field> characteristic_split(const Field& u, const Field& v, double phi)
{
    if (!(phi > 0.0)) {
        throw InvalidArgument("characteristic_split: phi must be positive");
    }
    if (!u.grid().same_cells(v.grid()) || u.grid().ghost != v.grid().ghost) {
        throw InvalidArgument("characteristic_split: fields live on different grids");
    }
    Field U(u.grid());
    Field V(u.grid());
    auto su = u.storage();
    auto sv = v.storage();
    auto pu = U.storage_mut();
    auto pv = V.storage_mut();
    const double inv = 0.5 / phi;
    for (std::size_t s = 0; s < su.size(); ++s) {
        pu[s] = (sv[s] + phi * su[s]) * inv;
        pv[s] = (phi * su[s] - sv[s]) * inv;
    }
    if (u.ghosts_filled() && v.ghosts_filled()) {
        U.mark_ghosts_filled(u.ghost_bc());
        V.mark_ghosts_filled(u.ghost_bc());
    }
    return {std::move(U), std::move(V)};
}

Field transport_rhs(const Field& U, const Field& V, double phi, ReconstructionKind kind, const Field& g_vals)
{
    if (!U.ghosts_filled() || !V.ghosts_filled()) {
        throw InvalidArgument("transport_rhs: characteristic variables need populated ghosts");
    }
    const Grid1D& g = U.grid();
    const auto n = static_cast<std::size_t>(g.m + 1);
    std::vector<double> um(n);
    std::vector<double> vp(n);
    Reconstructor rec(kind);
    rec.minus(U.storage(), g.m, g.ghost, um);
    rec.plus(V.storage(), g.m, g.ghost, vp);
    Field out(g);
    auto dst = out.interior_mut();
    auto src = g_vals.interior();
    const double lam = phi / g.h;
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = -lam * (um[i + 1] - um[i] - vp[i + 1] + vp[i]) + src[i];
    }
    return out;
}

double choose_phi(const Field& u0, const Problem& problem, double dt, PhiPolicy policy)
{
    require_scalar(problem, "choose_phi");
    if (!(dt > 0.0)) {
        throw InvalidArgument("choose_phi: time step must be positive");
    }
    if (policy.kind == PhiPolicy::Kind::Fixed) {
        return policy.value;
    }
    const Unknown& unk = problem.unknowns[0];
    double max_a = 0.0;
    if (unk.diffusive()) {
        auto in = u0.interior();
        for (std::size_t i = 0; i < in.size(); ++i) {
            max_a = std::max(max_a, unk.D * unk.A(in.subspan(i, 1)));
        }
    }
    if (!(max_a > 0.0)) {
        throw InvalidArgument("choose_phi: diffusivity vanishes everywhere; supply a fixed phi");
    }
    return policy.value * std::sqrt(max_a / dt);
}

RelaxStepper::RelaxStepper(Problem problem, Mesh mesh, SchemeConfig cfg)
    : problem_(std::move(problem)), mesh_(mesh), cfg_(std::move(cfg)), rec_(cfg_.reconstruction)
{
    problem_.validate();
    cfg_.validate();
    if (mesh_.dim != problem_.dim) {
        throw InvalidArgument("mesh and problem dimensions differ");
    }
    const std::size_t nu = problem_.count();
    for (const auto& u : problem_.unknowns) {
        any_diffusive_ = any_diffusive_ || u.diffusive();
    }
    for (int a = 0; a < mesh_.dim; ++a) {
        const Grid1D& g = mesh_.axis(a);
        if (g.ghost < cfg_.ghost_cells()) {
            throw InvalidArgument("mesh has too few ghost cells for the scheme");
        }
        const BoundaryPair& bc = a == 0 ? problem_.bc_x : problem_.bc_y;
        if (!bc.periodic_axis() && g.m < cfg_.gradient_order + 1) {
            throw InvalidArgument("grid needs at least 2p+1 cells next to a physical boundary");
        }
        if (bc.periodic_axis() && g.m < g.ghost) {
            throw InvalidArgument("periodic grid smaller than its ghost layer");
        }
        AxisWork& w = axes_[static_cast<std::size_t>(a)];
        w.grid = g;
        w.filler = AxisGhostFiller(bc, cfg_.gradient_order, g.ghost);
        w.lines.assign(nu, Field(g));
        w.grad = Field(g);
        w.flux = Field(g);
        w.flux_grad = Field(g);
        const auto total = static_cast<std::size_t>(g.total());
        w.U.assign(total, 0.0);
        w.V.assign(total, 0.0);
        w.um.assign(static_cast<std::size_t>(g.m + 1), 0.0);
        w.vp.assign(static_cast<std::size_t>(g.m + 1), 0.0);
    }
    const std::size_t cells = mesh_.cells();
    stage_rhs_.assign(static_cast<std::size_t>(cfg_.tableau.stages), Fields(nu, std::vector<double>(cells, 0.0)));
    stage_u_.assign(nu, std::vector<double>(cells, 0.0));
    point_.assign(nu, 0.0);
    rate_.assign(nu, 0.0);
}

std::size_t RelaxStepper::cell_index(int axis, int line, int i) const
{
    const auto nx = static_cast<std::size_t>(mesh_.x.m);
    if (axis == 0) {
        return static_cast<std::size_t>(line) * nx + static_cast<std::size_t>(i);
    }
    return static_cast<std::size_t>(i) * nx + static_cast<std::size_t>(line);
}

RelaxState RelaxStepper::initial_state() const
{
    RelaxState s;
    s.u.assign(problem_.count(), std::vector<double>(mesh_.cells(), 0.0));
    for (std::size_t k = 0; k < problem_.count(); ++k) {
        for (int j = 1; j <= mesh_.y.m; ++j) {
            const double y = mesh_.dim == 2 ? mesh_.y.center(j) : 0.0;
            for (int i = 1; i <= mesh_.x.m; ++i) {
                s.u[k][cell_index(0, j - 1, i - 1)] = problem_.initial(k, mesh_.x.center(i), y);
            }
        }
    }
    return s;
}

void RelaxStepper::apply_event(RelaxState& state, const StateEvent& event) const
{
    for (std::size_t k = 0; k < problem_.count(); ++k) {
        for (int j = 1; j <= mesh_.y.m; ++j) {
            const double y = mesh_.dim == 2 ? mesh_.y.center(j) : 0.0;
            for (int i = 1; i <= mesh_.x.m; ++i) {
                state.u[k][cell_index(0, j - 1, i - 1)] += event.increment(k, mesh_.x.center(i), y);
            }
        }
    }
}

double RelaxStepper::max_diffusivity(const Fields& u, std::size_t k) const
{
    const Unknown& unk = problem_.unknowns[k];
    if (!unk.diffusive() || unk.D == 0.0) {
        return 0.0;
    }
    std::vector<double> p(problem_.count());
    double best = 0.0;
    for (std::size_t c = 0; c < mesh_.cells(); ++c) {
        for (std::size_t q = 0; q < p.size(); ++q) {
            p[q] = u[q][c];
        }
        best = std::max(best, unk.D * unk.A(p));
    }
    return best;
}

double RelaxStepper::parabolic_dt(const RelaxState& state) const
{
    double max_a = 0.0;
    for (std::size_t k = 0; k < problem_.count(); ++k) {
        max_a = std::max(max_a, max_diffusivity(state.u, k));
    }
    if (!(max_a > 0.0)) {
        return kInf;
    }
    double inv_h2 = 1.0 / (mesh_.x.h * mesh_.x.h);
    if (mesh_.dim == 2) {
        inv_h2 += 1.0 / (mesh_.y.h * mesh_.y.h);
    }
    return cfg_.cfl_parabolic / (max_a * inv_h2);
}

double RelaxStepper::estimate_reaction_rate(const Fields& u) const
{
    const std::size_t nu = problem_.count();
    const std::size_t cells = mesh_.cells();
    std::vector<double> p(nu);
    std::vector<double> r0(nu);
    std::vector<double> r1(nu);
    if (problem_.reaction_rate_bound) {
        double best = 0.0;
        for (std::size_t c = 0; c < cells; ++c) {
            for (std::size_t q = 0; q < nu; ++q) {
                p[q] = u[q][c];
            }
            best = std::max(best, problem_.reaction_rate_bound(p));
        }
        return best;
    }
    if (nu == 1) {
        // Largest difference quotient of g over the range the solution spans.
        const auto [lo_it, hi_it] = std::minmax_element(u[0].begin(), u[0].end());
        double lo = *lo_it;
        double hi = *hi_it;
        const double width = hi - lo;
        if (!(width > 1e-12 * std::max(1.0, std::fabs(hi)))) {
            const double d = 1e-6 * std::max(1.0, std::fabs(hi));
            lo -= d;
            hi += d;
        }
        constexpr int samples = 64;
        const double du = (hi - lo) / samples;
        double best = 0.0;
        p[0] = lo;
        problem_.reaction(p, r0);
        for (int s = 1; s <= samples; ++s) {
            p[0] = lo + s * du;
            problem_.reaction(p, r1);
            best = std::max(best, std::fabs(r1[0] - r0[0]) / du);
            r0[0] = r1[0];
        }
        return best;
    }
    // Row sums of a forward-difference Jacobian, cell by cell.
    double best = 0.0;
    std::vector<double> row(nu);
    for (std::size_t c = 0; c < cells; ++c) {
        for (std::size_t q = 0; q < nu; ++q) {
            p[q] = u[q][c];
        }
        problem_.reaction(p, r0);
        std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t q = 0; q < nu; ++q) {
            const double d = 1e-7 * std::max(1.0, std::fabs(p[q]));
            const double keep = p[q];
            p[q] = keep + d;
            problem_.reaction(p, r1);
            p[q] = keep;
            for (std::size_t i = 0; i < nu; ++i) {
                row[i] += std::fabs(r1[i] - r0[i]) / d;
            }
        }
        best = std::max(best, *std::max_element(row.begin(), row.end()));
    }
    return best;
}

double RelaxStepper::reaction_dt(const RelaxState& state) const
{
    if (!problem_.has_reaction()) {
        return kInf;
    }
    const double rate = estimate_reaction_rate(state.u);
    return rate > 0.0 ? 0.5 / rate : kInf;
}

double RelaxStepper::stable_dt(const RelaxState& state) const
{
    double dt = std::min(parabolic_dt(state), reaction_dt(state));
    double h = mesh_.x.h;
    if (mesh_.dim == 2) {
        h = std::min(h, mesh_.y.h);
    }
    if (cfg_.phi.kind == PhiPolicy::Kind::Fixed && any_diffusive_) {
        dt = std::min(dt, 0.5 * h / cfg_.phi.value);
    } else if (any_diffusive_) {
        // Auto phi grows like 1/sqrt(dt); keep phi dt / h <= 1/2 self-consistently.
        double max_a = 0.0;
        for (std::size_t k = 0; k < problem_.count(); ++k) {
            max_a = std::max(max_a, max_diffusivity(state.u, k));
        }
        if (max_a > 0.0) {
            const double r = 0.5 * h / cfg_.phi.value;
            dt = std::min(dt, r * r / max_a);
        }
    }
    return dt;
}

std::vector<double> RelaxStepper::phi(const RelaxState& state, double dt) const
{
    std::vector<double> out(problem_.count(), 1.0);
    if (cfg_.phi.kind == PhiPolicy::Kind::Fixed) {
        std::fill(out.begin(), out.end(), cfg_.phi.value);
        return out;
    }
    if (!(dt > 0.0)) {
        throw InvalidArgument("choose_phi: time step must be positive");
    }
    double fallback = 0.0;
    std::vector<bool> set(out.size(), false);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double a = max_diffusivity(state.u, k);
        if (a > 0.0) {
            out[k] = cfg_.phi.value * std::sqrt(a / dt);
            set[k] = true;
            fallback = std::max(fallback, out[k]);
        }
    }
    // Every diffusivity vanished: the automatic speed tends to zero and so
    // does the transport, which evaluate() skips for phi = 0.
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!set[k]) {
            out[k] = fallback;
        }
    }
    return out;
}

void RelaxStepper::evaluate(const Fields& u, double t, std::span<const double> phi, Fields& rhs,
                            std::vector<Fields>* vout)
{
    const std::size_t nu = problem_.count();
    for (auto& r : rhs) {
        std::fill(r.begin(), r.end(), 0.0);
    }
    if (vout) {
        vout->assign(nu, Fields(static_cast<std::size_t>(mesh_.dim), std::vector<double>(mesh_.cells(), 0.0)));
    }
    const int p_order = cfg_.gradient_order;

    if (any_diffusive_) {
        for (int a = 0; a < mesh_.dim; ++a) {
            AxisWork& w = axes_[static_cast<std::size_t>(a)];
            const int m = w.grid.m;
            const auto g = static_cast<std::size_t>(w.grid.ghost);
            const int nlines = a == 0 ? mesh_.y.m : mesh_.x.m;
            const double inv_h = 1.0 / w.grid.h;
            const std::size_t total = static_cast<std::size_t>(w.grid.total());
            for (int line = 0; line < nlines; ++line) {
                for (std::size_t k = 0; k < nu; ++k) {
                    auto s = w.lines[k].storage_mut();
                    for (int i = 0; i < m; ++i) {
                        s[g + static_cast<std::size_t>(i)] = u[k][cell_index(a, line, i)];
                    }
                    w.filler.fill(w.lines[k], t);
                }
                for (std::size_t k = 0; k < nu; ++k) {
                    const Unknown& unk = problem_.unknowns[k];
                    if (!unk.diffusive() || !(phi[k] > 0.0)) {
                        continue;
                    }
                    gradient_into(w.lines[k], p_order, w.grad);
                    auto grad = w.grad.storage();
                    auto uk = w.lines[k].storage();
                    const double ph = phi[k];
                    const double inv2 = 0.5 / ph;
                    for (std::size_t s = 0; s < total; ++s) {
                        for (std::size_t q = 0; q < nu; ++q) {
                            point_[q] = w.lines[q].storage()[s];
                        }
                        const double v = -unk.D * unk.A(point_) * grad[s];
                        w.U[s] = (v + ph * uk[s]) * inv2;
                        w.V[s] = (ph * uk[s] - v) * inv2;
                        if (vout && s >= g && s < g + static_cast<std::size_t>(m)) {
                            (*vout)[k][static_cast<std::size_t>(a)][cell_index(a, line, static_cast<int>(s - g))] = v;
                        }
                    }
                    rec_.minus(w.U, m, w.grid.ghost, w.um);
                    rec_.plus(w.V, m, w.grid.ghost, w.vp);
                    auto& r = rhs[k];
                    const double lam = ph * inv_h;
                    for (int i = 0; i < m; ++i) {
                        const auto ii = static_cast<std::size_t>(i);
                        r[cell_index(a, line, i)] -= lam * (w.um[ii + 1] - w.um[ii] - w.vp[ii + 1] + w.vp[ii]);
                    }
                }
                if (problem_.advection && problem_.advection->gamma != 0.0) {
                    const ExtraAdvection& adv = *problem_.advection;
                    gradient_into(w.lines[adv.potential], p_order, w.grad);
                    auto carrier = w.lines[adv.carrier].storage();
                    auto grad = w.grad.storage();
                    auto flux = w.flux.storage_mut();
                    for (std::size_t s = 0; s < total; ++s) {
                        flux[s] = carrier[s] * grad[s];
                    }
                    w.flux.mark_ghosts_filled(w.filler.bc());
                    gradient_into(w.flux, p_order, w.flux_grad);
                    auto div = w.flux_grad.interior();
                    auto& r = rhs[adv.carrier];
                    for (int i = 0; i < m; ++i) {
                        r[cell_index(a, line, i)] += adv.gamma * div[static_cast<std::size_t>(i)];
                    }
                }
            }
        }
    }

    if (problem_.has_reaction()) {
        for (std::size_t c = 0; c < mesh_.cells(); ++c) {
            for (std::size_t q = 0; q < nu; ++q) {
                point_[q] = u[q][c];
            }
            problem_.reaction(point_, rate_);
            for (std::size_t q = 0; q < nu; ++q) {
                rhs[q][c] += rate_[q];
            }
        }
    }
}

void RelaxStepper::step(RelaxState& state, double dt)
{
    const auto ph = phi(state, dt);
    step(state, dt, ph);
}

void RelaxStepper::step(RelaxState& state, double dt, std::span<const double> ph)
{
    if (!(dt > 0.0)) {
        throw InvalidArgument("step: time step must be positive");
    }
    const Tableau& tb = cfg_.tableau;
    const std::size_t nu = problem_.count();
    const std::size_t cells = mesh_.cells();
    for (int i = 0; i < tb.stages; ++i) {
        const Fields* stage = &state.u;
        if (i > 0) {
            for (std::size_t k = 0; k < nu; ++k) {
                auto& dst = stage_u_[k];
                const auto& base = state.u[k];
                for (std::size_t c = 0; c < cells; ++c) {
                    double acc = 0.0;
                    for (int q = 0; q < i; ++q) {
                        acc += tb.coef(i, q) * stage_rhs_[static_cast<std::size_t>(q)][k][c];
                    }
                    dst[c] = base[c] + dt * acc;
                }
            }
            stage = &stage_u_;
        }
        evaluate(*stage, state.t + tb.c[static_cast<std::size_t>(i)] * dt, ph, stage_rhs_[static_cast<std::size_t>(i)]);
    }
    if (state.carry.size() != nu) {
        state.carry.assign(nu, std::vector<double>(cells, 0.0));
    }
    for (std::size_t k = 0; k < nu; ++k) {
        auto& dst = state.u[k];
        auto& carry = state.carry[k];
        for (std::size_t c = 0; c < cells; ++c) {
            double acc = 0.0;
            for (int q = 0; q < tb.stages; ++q) {
                acc += tb.b[static_cast<std::size_t>(q)] * stage_rhs_[static_cast<std::size_t>(q)][k][c];
            }
            // Kahan update: long runs otherwise drift by O(sqrt(steps)) ulps.
            const double inc = dt * acc - carry[c];
            const double sum = dst[c] + inc;
            carry[c] = (sum - dst[c]) - inc;
            dst[c] = sum;
        }
    }
    const double dt_in = dt - state.t_carry;
    const double t_new = state.t + dt_in;
    state.t_carry = (t_new - state.t) - dt_in;
    state.t = t_new;
    check_finite(state);
    if (!state.v.empty()) {
        relax(state);
    }
}

void RelaxStepper::relax(RelaxState& state)
{
    // Only the relaxation fluxes are wanted; the right-hand side is scratch.
    const std::vector<double> ph(problem_.count(), 1.0);
    evaluate(state.u, state.t, ph, stage_rhs_[0], &state.v);
}

void RelaxStepper::check_finite(const RelaxState& state) const
{
    for (std::size_t k = 0; k < state.u.size(); ++k) {
        for (std::size_t c = 0; c < state.u[k].size(); ++c) {
            if (!std::isfinite(state.u[k][c])) {
                std::ostringstream msg;
                msg << "non-finite value in unknown '" << problem_.unknowns[k].name << "' at cell " << c
                    << " (x index " << c % static_cast<std::size_t>(mesh_.x.m) + 1 << ", y index "
                    << c / static_cast<std::size_t>(mesh_.x.m) + 1 << ") at t=" << state.t;
                throw SolverFault(msg.str(), k, c, state.t);
            }
        }
    }
}

RelaxState step(const RelaxState& state, const Problem& problem, const Mesh& mesh, const SchemeConfig& cfg, double dt)
{
    RelaxStepper stepper(problem, mesh, cfg);
    RelaxState next = state;
    if (next.v.empty()) {
        next.v.resize(1);
    }
    stepper.step(next, dt);
    return next;
}

std::vector<Snapshot> run(const Problem& problem, const Mesh& mesh, const SchemeConfig& cfg, double t_end,
                          std::vector<double> snapshot_times, const RunOptions& options)
{
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw InvalidArgument("run: t_end must be a finite non-negative time");
    }
    if (snapshot_times.empty()) {
        snapshot_times = {0.0, t_end};
    }
    for (double s : snapshot_times) {
        if (!(s >= 0.0 && s <= t_end)) {
            throw InvalidArgument("run: snapshot time outside [0, t_end]");
        }
    }
    const std::set<double> snaps(snapshot_times.begin(), snapshot_times.end());
    std::set<double> stops(snaps.begin(), snaps.end());
    stops.insert(t_end);
    for (const auto& e : problem.events) {
        if (e.time > 0.0 && e.time <= t_end) {
            stops.insert(e.time);
        }
    }

    RelaxStepper stepper(problem, mesh, cfg);
    RelaxState state = stepper.initial_state();
    std::vector<Snapshot> out;

    auto at_stop = [&](double t) {
        for (const auto& e : problem.events) {
            if (e.time == t || (t == 0.0 && e.time <= 0.0)) {
                stepper.apply_event(state, e);
            }
        }
        if (snaps.count(t) != 0) {
            out.push_back({t, state.u});
        }
    };

    at_stop(0.0);
    for (double stop : stops) {
        if (stop <= 0.0) {
            continue;
        }
        while (state.t < stop) {
            const double remaining = (stop - state.t) + state.t_carry;
            double dt = stepper.stable_dt(state);
            bool last = false;
            if (dt >= remaining * (1.0 - 1e-12)) {
                dt = remaining;
                last = true;
            } else if (dt > 0.5 * remaining) {
                dt = 0.5 * remaining;
            }
            const Snapshot good{state.t, state.u};
            try {
                stepper.step(state, dt);
            } catch (const SolverFault& f) {
                throw RunFault(f, good);
            }
            if (last) {
                state.t = stop;
                state.t_carry = 0.0;
            }
            if (options.observer && !options.observer(state)) {
                out.push_back({state.t, state.u});
                return out;
            }
        }
        at_stop(stop);
    }
    return out;
}

} // namespace relaxrd
