#include "neel/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "neel/energy.hpp"
#include "neel/errors.hpp"
#include "parallel.hpp"

namespace neel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRk4StabilityLimit = 2.5;

void check_dt(double dt, const GridPtr& grid) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (dt * grid->xi_max() > kRk4StabilityLimit) {
        throw std::invalid_argument("time step exceeds the RK4 stability limit dt*xi_max <= 2.5");
    }
}

int step_count(double t0, double t1, double dt) {
    const double n = (t1 - t0) / dt;
    const long long k = std::llround(n);
    if (k < 0 || std::abs(n - static_cast<double>(k)) > 1e-8 * (std::abs(n) + 1.0)) {
        throw std::invalid_argument("(t1 - t0) must be a whole number of steps");
    }
    return static_cast<int>(k);
}

}  // namespace

Forcing::Forcing(Kind kind, double amplitude, double period)
    : kind_(kind), amplitude_(amplitude), period_(period) {
    if (!(period > 0.0)) throw std::invalid_argument("forcing period must be positive");
}

Forcing Forcing::cosine(double amplitude, double period) {
    Forcing f(Kind::cosine, amplitude, period);
    f.check_antiperiodic();
    return f;
}

Forcing Forcing::odd_harmonics(std::vector<double> amplitudes, double period) {
    double a0 = 0.0;
    for (double a : amplitudes) a0 = std::max(a0, std::abs(a));
    Forcing f(Kind::odd_harmonics, a0, period);
    f.harmonics_ = std::move(amplitudes);
    f.check_antiperiodic();
    return f;
}

Forcing Forcing::custom_samples(std::vector<double> samples, double period) {
    if (samples.size() < 2 || samples.size() % 2 != 0) {
        throw std::invalid_argument("custom forcing needs an even number of samples");
    }
    double a0 = 0.0;
    for (double s : samples) a0 = std::max(a0, std::abs(s));
    Forcing f(Kind::custom_samples, a0, period);

    // Trigonometric interpolation coefficients (mode amplitudes).
    const int n = static_cast<int>(samples.size());
    f.trig_coeff_.resize(n);
    for (int k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < n; ++j) {
            acc += samples[j] * std::polar(1.0, -kTwoPi * k * j / n);
        }
        f.trig_coeff_[k] = acc / static_cast<double>(n);
    }
    f.check_antiperiodic();
    return f;
}

double Forcing::operator()(double t) const {
    const double tau = kTwoPi * t / period_;
    switch (kind_) {
        case Kind::cosine:
            return amplitude_ * std::cos(tau);
        case Kind::odd_harmonics: {
            double acc = 0.0;
            for (size_t m = 0; m < harmonics_.size(); ++m) {
                acc += harmonics_[m] * std::cos((2.0 * m + 1.0) * tau);
            }
            return acc;
        }
        case Kind::custom_samples: {
            const int n = static_cast<int>(trig_coeff_.size());
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                const int kk = (k <= n / 2) ? k : k - n;  // signed harmonic index
                if (k == n / 2) {
                    acc += (trig_coeff_[k] * std::cos(n / 2 * tau)).real();
                } else {
                    acc += (trig_coeff_[k] * std::polar(1.0, kk * tau)).real();
                }
            }
            return acc;
        }
    }
    return 0.0;
}

void Forcing::check_antiperiodic() const {
    const Forcing& H = *this;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = period_ * i / 1000.0;
        worst = std::max(worst, std::abs(H(t) + H(t + 0.5 * period_)));
    }
    if (worst > 1e-10 * std::max(1.0, amplitude_)) {
        throw std::invalid_argument("forcing violates the half-period symmetry H(t) = -H(t+T/2)");
    }
}

namespace {

// RHS of the nonlinear system at fixed reference.
State nonlinear_rhs(const State& s, double t, const NonlinearSystem& sys, const PhaseRef& ref) {
    State out(s.grid());
    out.u = s.v;
    const Field grad = energy_gradient(s.u, ref);
    const double eh = sys.epsilon * sys.H(t);
    const int n = s.u.size();
    for (int j = 0; j < n; ++j) {
        const double cos_theta = std::cos(ref.theta[j] + s.u[j]);
        out.v[j] = -sys.nu * s.v[j] - grad[j] + eh * cos_theta;
    }
    return out;
}

template <typename Rhs>
State rk4_step(const State& s, double t, double dt, Rhs rhs) {
    State k1 = rhs(s, t);
    State s2 = s;
    State tmp = k1;
    tmp *= 0.5 * dt;
    s2 += tmp;
    State k2 = rhs(s2, t + 0.5 * dt);
    State s3 = s;
    tmp = k2;
    tmp *= 0.5 * dt;
    s3 += tmp;
    State k3 = rhs(s3, t + 0.5 * dt);
    State s4 = s;
    tmp = k3;
    tmp *= dt;
    s4 += tmp;
    State k4 = rhs(s4, t + dt);

    State out = s;
    k2 += k3;
    k2 *= 2.0;
    k1 += k2;
    k1 += k4;
    k1 *= dt / 6.0;
    out += k1;
    return out;
}

}  // namespace

State step_nonlinear(const State& s, double t, double dt, double epsilon, double nu,
                     const Forcing* forcing) {
    check_dt(dt, s.grid());
    const PhaseRef ref = PhaseRef::wall(s.grid());
    NonlinearSystem sys{epsilon, nu, forcing};
    return rk4_step(s, t, dt,
                    [&](const State& x, double tau) { return nonlinear_rhs(x, tau, sys, ref); });
}

State step_linear(const State& s, double t, double dt, const ASystem& sys) {
    check_dt(dt, s.grid());
    return rk4_step(s, t, dt, [&](const State& x, double tau) { return apply_A(tau, x, sys); });
}

State integrate_linear(State s, double t0, double t1, double dt, const ASystem& sys) {
    check_dt(dt, s.grid());
    const int n = step_count(t0, t1, dt);
    for (int i = 0; i < n; ++i) {
        s = rk4_step(s, t0 + i * dt, dt,
                     [&](const State& x, double tau) { return apply_A(tau, x, sys); });
    }
    return s;
}

namespace {

struct StageCoefficients {
    Field sin_theta;
    Field c_coeff;
    double eps_h = 0.0;
};

State apply_A_staged(const StageCoefficients& sc, double nu, const State& s) {
    State out(s.grid());
    out.u = s.v;
    const Field lu = apply_L_coefficients(sc.sin_theta, sc.c_coeff, s.u);
    for (int j = 0; j < s.u.size(); ++j) {
        out.v[j] = -lu[j] - sc.eps_h * sc.sin_theta[j] * s.u[j] - nu * s.v[j];
    }
    return out;
}

}  // namespace

void integrate_linear_block(std::vector<State>& states, double t0, double t1, double dt,
                            const ASystem& sys) {
    if (states.empty()) return;
    check_dt(dt, states.front().grid());
    const int n = step_count(t0, t1, dt);
    const GridPtr grid = states.front().grid();

    StageCoefficients s_begin{Field(grid), Field(grid)};
    StageCoefficients s_mid{Field(grid), Field(grid)};
    StageCoefficients s_end{Field(grid), Field(grid)};
    auto load = [&](StageCoefficients& sc, double t) {
        sys.coeffs->eval(t, sc.sin_theta, sc.c_coeff);
        sc.eps_h = sys.epsilon * sys.H(t);
    };

    for (int i = 0; i < n; ++i) {
        const double t = t0 + i * dt;
        load(s_begin, t);
        load(s_mid, t + 0.5 * dt);
        load(s_end, t + dt);
        detail::parallel_for(static_cast<int>(states.size()), [&](int idx) {
            State& s = states[idx];
            State k1 = apply_A_staged(s_begin, sys.nu, s);
            State x = s;
            State tmp = k1;
            tmp *= 0.5 * dt;
            x += tmp;
            State k2 = apply_A_staged(s_mid, sys.nu, x);
            x = s;
            tmp = k2;
            tmp *= 0.5 * dt;
            x += tmp;
            State k3 = apply_A_staged(s_mid, sys.nu, x);
            x = s;
            tmp = k3;
            tmp *= dt;
            x += tmp;
            State k4 = apply_A_staged(s_end, sys.nu, x);
            k2 += k3;
            k2 *= 2.0;
            k1 += k2;
            k1 += k4;
            k1 *= dt / 6.0;
            s += k1;
        });
    }
}

std::pair<double, double> hypocoercivity_functionals(const State& s, const StaticWall& wall,
                                                     double nu) {
    return hypocoercivity_functionals(s, EnergyNorm(wall), nu);
}

std::pair<double, double> hypocoercivity_functionals(const State& s, const EnergyNorm& znorm,
                                                     double nu) {
    const double ul0u = znorm.u_quadratic(s.u);
    const double vv = norm_sq_l2(s.v);
    const double f = vv + ul0u + 0.5 * nu * nu * norm_sq_l2(s.u) + nu * inner(s.u, s.v);
    const double g = nu * (vv + ul0u);
    return {f, g};
}

Trajectory evolve(const State& s0, double t0, double t1, double dt, const EvolveContext& ctx) {
    check_dt(dt, s0.grid());
    const int n_steps = step_count(t0, t1, dt);
    const PhaseRef ref = PhaseRef::wall(s0.grid());
    NonlinearSystem sys{ctx.epsilon, ctx.nu, ctx.forcing};

    std::optional<EnergyNorm> znorm;
    if (ctx.wall) znorm.emplace(*ctx.wall);

    Trajectory traj;
    const int stride = std::max(1, ctx.record_stride);
    traj.times.reserve(n_steps / stride + 2);
    traj.diagnostics.reserve(n_steps / stride + 2);

    State s = s0;
    auto record = [&](double t) {
        TrajectoryEntry e;
        e.t = t;
        e.norm_w = norm_l2(s.u);
        e.norm_v = norm_l2(s.v);
        if (znorm) {
            State dev = s;
            dev.u -= ctx.wall->w0;
            const auto [f, g] = hypocoercivity_functionals(dev, *znorm, ctx.nu);
            e.f = f;
            e.g = g;
            e.z_sq = g / ctx.nu;
        }
        traj.times.push_back(t);
        traj.diagnostics.push_back(e);
        if (ctx.store_states) traj.states.push_back(s);
    };

    record(t0);
    for (int i = 0; i < n_steps; ++i) {
        const double t = t0 + i * dt;
        s = rk4_step(s, t, dt,
                     [&](const State& x, double tau) { return nonlinear_rhs(x, tau, sys, ref); });
        // The H1 guard costs a transform; sampling it every few steps is
        // enough to catch a blow-up long before overflow.
        if (i % 16 == 0 || i + 1 == n_steps) {
            const double h1 = norm_h1(s.u);
            if (!(h1 < ctx.blowup_norm)) throw BlowUp(h1, t + dt);
        }
        if ((i + 1) % stride == 0) record(t0 + (i + 1) * dt);
    }
    traj.final_state = s;
    return traj;
}

}  // namespace neel
