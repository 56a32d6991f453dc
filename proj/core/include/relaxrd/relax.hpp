#pragma once

#include "relaxrd/error.hpp"
#include "relaxrd/findiff.hpp"
#include "relaxrd/mesh.hpp"
#include "relaxrd/problem.hpp"
#include "relaxrd/reconstruct.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace relaxrd {

/// Explicit Runge-Kutta tableau driving the transport steps.
struct Tableau {
    std::string name;
    int order = 1;
    int stages = 1;
    std::vector<double> a; ///< stages x stages, strictly lower triangular
    std::vector<double> b;
    std::vector<double> c;

    double coef(int i, int k) const { return a[static_cast<std::size_t>(i * stages + k)]; }

    static Tableau rk1();
    /// Heun's method.
    static Tableau rk2();
    /// Three-stage strong-stability-preserving scheme.
    static Tableau rk3();
    static Tableau of_order(int order);
};

/// Choice of the relaxation wave speed phi.
struct PhiPolicy {
    enum class Kind { Fixed, Auto };

    Kind kind = Kind::Auto;
    /// phi itself for Fixed, the safety factor kappa for Auto.
    double value = 1.0;

    static PhiPolicy fixed(double phi) { return {Kind::Fixed, phi}; }
    static PhiPolicy automatic(double kappa = 1.0) { return {Kind::Auto, kappa}; }

    bool operator==(const PhiPolicy&) const = default;
};

struct SchemeConfig {
    ReconstructionKind reconstruction = ReconstructionKind::eno(3);
    Tableau tableau = Tableau::rk2();
    double cfl_parabolic = 0.25;
    PhiPolicy phi = PhiPolicy::automatic(1.0);
    /// Order 2p of the gradient in the relaxation step and degree of the
    /// boundary extrapolant.
    int gradient_order = 4;

    /// Pairs a reconstruction with RK of the given order and gradient order 2p.
    static SchemeConfig make(ReconstructionKind reconstruction, int rk_order);

    int ghost_cells() const;
    void validate() const;
};

/// Computational mesh of a problem: one axis in 1D, two in 2D. In 1D the y
/// axis is a single cell without ghosts.
struct Mesh {
    int dim = 1;
    Grid1D x;
    Grid1D y{0.0, 1.0, 1, 1.0, 0};

    std::size_t cells() const { return static_cast<std::size_t>(x.m) * static_cast<std::size_t>(y.m); }
    const Grid1D& axis(int a) const { return a == 0 ? x : y; }

    /// Mesh over the problem domain with the ghost layer the scheme needs.
    static Mesh make(const Problem& problem, const SchemeConfig& cfg, int mx, int my = 0);
};

using Fields = std::vector<std::vector<double>>;

/// Interior values per unknown (row-major over (y, x) in 2D) plus the
/// relaxation flux per unknown and axis when tracking is enabled.
struct RelaxState {
    double t = 0.0;
    Fields u;
    std::vector<Fields> v;
    /// Round-off carried between compensated updates of u and t.
    Fields carry;
    double t_carry = 0.0;
};

struct Snapshot {
    double t = 0.0;
    Fields fields;
};

/// v = -D A(u) du/dx for a scalar problem; `u` must have its ghosts filled.
Field relaxation_step(const Field& u, const Problem& problem, int order);

/// U = (v + phi u) / (2 phi), V = (phi u - v) / (2 phi) over the whole storage.
std::pair<Field, Field> characteristic_split(const Field& u, const Field& v, double phi);

/// du/dt at the centres from upwind fluxes phi U^- - phi V^+ plus g.
Field transport_rhs(const Field& U, const Field& V, double phi, ReconstructionKind kind, const Field& g_vals);

/// Fixed policy returns its value; Auto returns kappa sqrt(D max A(u0) / dt)
/// for the scalar problem.
double choose_phi(const Field& u0, const Problem& problem, double dt, PhiPolicy policy);

/// Reusable time stepper for one problem on one mesh.
class RelaxStepper {
public:
    RelaxStepper(Problem problem, Mesh mesh, SchemeConfig cfg);

    const Problem& problem() const { return problem_; }
    const Mesh& mesh() const { return mesh_; }
    const SchemeConfig& config() const { return cfg_; }

    RelaxState initial_state() const;

    /// Largest step allowed by the parabolic, reaction and wave-speed limits.
    double stable_dt(const RelaxState& state) const;
    double parabolic_dt(const RelaxState& state) const;
    double reaction_dt(const RelaxState& state) const;

    /// Wave speed per unknown for a step of size dt from `state`. Under the
    /// Auto policy an unknown without diffusion borrows the largest speed of
    /// the others; if every diffusivity vanishes all speeds are 0 and the step
    /// reduces to the reaction alone.
    std::vector<double> phi(const RelaxState& state, double dt) const;

    void step(RelaxState& state, double dt);
    void step(RelaxState& state, double dt, std::span<const double> phi);

    /// Evaluates the semi-discrete right-hand side at time t.
    void evaluate(const Fields& u, double t, std::span<const double> phi, Fields& rhs, std::vector<Fields>* v = nullptr);

    /// Recomputes state.v from state.u; later steps keep it current.
    void relax(RelaxState& state);

    void apply_event(RelaxState& state, const StateEvent& event) const;

    /// Largest D A(u) over cells for unknown k.
    double max_diffusivity(const Fields& u, std::size_t k) const;

private:
    struct AxisWork {
        Grid1D grid;
        AxisGhostFiller filler;
        std::vector<Field> lines;
        Field grad;
        Field flux;
        Field flux_grad;
        std::vector<double> U, V, um, vp;
    };

    std::size_t cell_index(int axis, int line, int i) const;
    double estimate_reaction_rate(const Fields& u) const;
    void check_finite(const RelaxState& state) const;

    Problem problem_;
    Mesh mesh_;
    SchemeConfig cfg_;
    Reconstructor rec_;
    std::array<AxisWork, 2> axes_;
    std::vector<Fields> stage_rhs_;
    Fields stage_u_;
    std::vector<double> point_;
    std::vector<double> rate_;
    bool any_diffusive_ = false;
};

/// Single step of the relaxed scheme; state.v is refreshed for the new u.
RelaxState step(const RelaxState& state, const Problem& problem, const Mesh& mesh, const SchemeConfig& cfg, double dt);

struct RunOptions {
    /// Called after every step; returning false ends the run early.
    std::function<bool(const RelaxState&)> observer;
};

/// Non-finite value during a run; carries the last finite state.
class RunFault : public SolverFault {
public:
    RunFault(const SolverFault& fault, Snapshot last_good)
        : SolverFault(fault), last_good_(std::move(last_good))
    {
    }
    const Snapshot& last_good() const { return last_good_; }

private:
    Snapshot last_good_;
};

/// Advances from t = 0 to t_end, returning snapshots at exactly the requested
/// times (all in [0, t_end]). With no requested times, the initial and final
/// states are returned.
std::vector<Snapshot> run(const Problem& problem, const Mesh& mesh, const SchemeConfig& cfg, double t_end,
                          std::vector<double> snapshot_times = {}, const RunOptions& options = {});

} // namespace relaxrd
