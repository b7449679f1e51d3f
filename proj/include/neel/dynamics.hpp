#pragma once

#include <optional>
#include <vector>

#include "neel/linear_ops.hpp"

namespace neel {

// T-periodic applied field H(t) with the half-period sign symmetry
// H(t) = -H(t + T/2); this is checked on 1000 sample points at construction
// (custom samples are rejected if they violate it). The symmetry implies
// zero mean over a period.
class Forcing {
public:
    enum class Kind { cosine, odd_harmonics, custom_samples };

    // H(t) = h0 cos(2 pi t / T).
    static Forcing cosine(double amplitude, double period);
    // H(t) = sum_m a_m cos(2 pi (2m+1) t / T).
    static Forcing odd_harmonics(std::vector<double> amplitudes, double period);
    // Uniform periodic samples H(i T / n), evaluated in between by
    // trigonometric interpolation. The sample count must be even.
    static Forcing custom_samples(std::vector<double> samples, double period);

    double operator()(double t) const;
    double period() const { return period_; }
    double amplitude() const { return amplitude_; }
    Kind kind() const { return kind_; }

private:
    Forcing(Kind kind, double amplitude, double period);
    void check_antiperiodic() const;

    Kind kind_;
    double amplitude_;
    double period_;
    std::vector<double> harmonics_;                  // odd_harmonics
    std::vector<std::complex<double>> trig_coeff_;   // custom_samples
};

// Nonlinear reduced dynamics in the (w, v = dw/dt) variables, theta =
// theta_ref + w:
//   d/dt (w, v) = (v, -nu v - grad E(theta) + eps H(t) cos(theta)).
struct NonlinearSystem {
    double epsilon = 0.0;
    double nu = 0.5;
    const Forcing* forcing = nullptr;  // null means H == 0

    double H(double t) const { return forcing ? (*forcing)(t) : 0.0; }
};

// One classical RK4 step of the nonlinear dynamics. The explicit scheme is
// stable for dt * xi_max <~ 2.5 (the wave system's frequencies scale like
// xi, not xi^2); this is checked at call time.
State step_nonlinear(const State& s, double t, double dt, double epsilon, double nu,
                     const Forcing* forcing);

// One classical RK4 step of the linear system d/dt s = A(t) s; exactly
// linear in s.
State step_linear(const State& s, double t, double dt, const ASystem& sys);

// Composition of linear steps over [t0, t1] with fixed dt ((t1-t0)/dt must
// be a whole number of steps).
State integrate_linear(State s, double t0, double t1, double dt, const ASystem& sys);

// Same evolution applied to a batch of states: the time-dependent
// coefficients are evaluated once per stage time and shared, and the
// independent states are advanced in parallel. Used by dense monodromy
// assembly, where every column sees the same A(t).
void integrate_linear_block(std::vector<State>& states, double t0, double t1, double dt,
                            const ASystem& sys);

// Modified energy pair of the damped wave system relative to the wall:
//   f = ||v||^2 + <u, L0 u> + (nu^2/2)||u||^2 + nu <u, v>,
//   g = nu (||v||^2 + <u, L0 u>);
// along free linear trajectories df/dt = -g.
std::pair<double, double> hypocoercivity_functionals(const State& s, const StaticWall& wall,
                                                     double nu);
std::pair<double, double> hypocoercivity_functionals(const State& s, const EnergyNorm& znorm,
                                                     double nu);

struct TrajectoryEntry {
    double t = 0.0;
    double norm_w = 0.0;  // L2 norm of the u-component (w for nonlinear runs)
    double norm_v = 0.0;
    double f = 0.0;       // hypocoercivity functionals relative to the wall
    double g = 0.0;
    double z_sq = 0.0;    // Z-norm squared of the deviation
};

struct Trajectory {
    std::vector<double> times;            // recorded times, uniform stride
    std::vector<TrajectoryEntry> diagnostics;
    std::vector<State> states;            // filled when store_states is set
    State final_state;
};

struct EvolveContext {
    double epsilon = 0.0;
    double nu = 0.5;
    const Forcing* forcing = nullptr;
    // When set, diagnostics are recorded for the deviation from this wall.
    const StaticWall* wall = nullptr;
    int record_stride = 1;
    bool store_states = false;
    double blowup_norm = 1e3;  // H1 guard on w
};

// Fixed-step nonlinear evolution; throws BlowUp when the H1 guard trips.
// With fixed dt the composition of two evolves equals one evolve over the
// union interval bitwise.
Trajectory evolve(const State& s0, double t0, double t1, double dt, const EvolveContext& ctx);

}  // namespace neel
