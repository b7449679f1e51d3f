#include "neel/periodic_orbit.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "krylov.hpp"
#include "neel/errors.hpp"

namespace neel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform 4-point (cubic Lagrange) interpolation weights at offset
// lambda in [0,1) between nodes {i-1, i, i+1, i+2}.
struct CubicWeights {
    int base;  // index i
    double c[4];
};

CubicWeights cubic_weights(double t, double period, int m) {
    double p = std::fmod(t, period) / period * m;
    if (p < 0.0) p += m;
    int i = static_cast<int>(std::floor(p));
    if (i >= m) i -= m;
    const double s = p - i;
    CubicWeights w;
    w.base = i;
    w.c[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
    w.c[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    w.c[2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
    w.c[3] = (s + 1.0) * s * (s - 1.0) / 6.0;
    return w;
}

}  // namespace

State PeriodicWall::state_at(double t) const {
    const int m = n_snapshots();
    const CubicWeights cw = cubic_weights(t, T, m);
    State out(grid_ref);
    for (int o = 0; o < 4; ++o) {
        const State& s = snapshots[(cw.base + o - 1 + m) % m];
        const double c = cw.c[o];
        for (int j = 0; j < out.u.size(); ++j) {
            out.u[j] += c * s.u[j];
            out.v[j] += c * s.v[j];
        }
    }
    return out;
}

State PeriodicWall::theta_bar_mode(int m) const {
    const State& s = snapshots[m % n_snapshots()];
    State out(grid_ref);
    out.u = reference_phase_dx(grid_ref);
    out.u += derivative(s.u);
    out.v = derivative(s.v);
    return out;
}

void PeriodicWall::eval(double t, Field& sin_theta, Field& c_coeff) const {
    const int m = n_snapshots();
    const CubicWeights cw = cubic_weights(t, T, m);
    Field w(grid_ref);
    for (int o = 0; o < 4; ++o) {
        const Field& u = snapshots[(cw.base + o - 1 + m) % m].u;
        const double c = cw.c[o];
        for (int j = 0; j < w.size(); ++j) w[j] += c * u[j];
    }
    const Field ref = reference_phase(grid_ref);
    Field cos_theta(grid_ref);
    sin_theta = Field(grid_ref);
    for (int j = 0; j < w.size(); ++j) {
        const double th = ref[j] + w[j];
        cos_theta[j] = std::cos(th);
        sin_theta[j] = std::sin(th);
    }
    Field kc = half_laplacian(cos_theta);
    kc += cos_theta;
    c_coeff = Field(grid_ref);
    for (int j = 0; j < w.size(); ++j) c_coeff[j] = cos_theta[j] * kc[j];
}

ASystem PeriodicWall::linear_system() const {
    ASystem sys;
    sys.coeffs = this;
    sys.epsilon = epsilon;
    sys.nu = nu;
    const Forcing* f = forcing.get();
    sys.field = [f](double t) { return (*f)(t); };
    return sys;
}

std::pair<double, Field> extract_translation(const Field& w_snapshot, const StaticWall& wall) {
    const GridPtr& grid = wall.grid;
    const int n = grid->N();
    const Field w0_dx = derivative(wall.w0);
    const Field w0_dxx = second_derivative(wall.w0);
    const Field ref = reference_phase(grid);

    // g(X) = <theta - theta0(.+X), dx theta0(.+X)> and its X-derivative;
    // shifted profiles combine the analytic reference with spectrally
    // shifted decaying parts.
    auto orthogonality = [&](double shift, bool with_slope) -> std::pair<double, double> {
        const Field w0_s = spectral_shift(wall.w0, shift);
        const Field dw0_s = spectral_shift(w0_dx, shift);
        const Field ddw0_s = with_slope ? spectral_shift(w0_dxx, shift) : Field(grid);
        double g = 0.0;
        double gp = 0.0;
        for (int j = 0; j < n; ++j) {
            const double xs = grid->x(j) + shift;
            const double t = std::tanh(xs);
            const double sech2 = 1.0 - t * t;
            const double theta0_s = 0.5 * std::numbers::pi * t + w0_s[j];
            const double dtheta0_s = 0.5 * std::numbers::pi * sech2 + dw0_s[j];
            const double diff = (ref[j] + w_snapshot[j]) - theta0_s;
            g += diff * dtheta0_s;
            if (with_slope) {
                const double ddtheta0_s = -std::numbers::pi * sech2 * t + ddw0_s[j];
                gp += -dtheta0_s * dtheta0_s + diff * ddtheta0_s;
            }
        }
        return {g * grid->dx(), gp * grid->dx()};
    };

    const double x_cap = grid->L() / 4.0;
    double x = 0.0;
    double ga = orthogonality(0.0, false).first;
    if (ga != 0.0) {
        // Bracket the root nearest zero.
        double a = 0.0, b = 0.0;
        double step = 0.0625;
        bool bracketed = false;
        while (step <= x_cap) {
            if (ga * orthogonality(step, false).first <= 0.0) {
                a = 0.0;
                b = step;
                bracketed = true;
                break;
            }
            if (ga * orthogonality(-step, false).first <= 0.0) {
                a = -step;
                b = 0.0;
                ga = orthogonality(a, false).first;
                bracketed = true;
                break;
            }
            step *= 2.0;
        }
        if (!bracketed) {
            throw NoRootInBracket("translation extraction found no root within |X| <= L/4");
        }

        // Newton from the bracket midpoint, bisection fallback.
        x = 0.5 * (a + b);
        for (int it = 0; it < 60; ++it) {
            const auto [g, gp] = orthogonality(x, true);
            if (g == 0.0) break;
            if (g * ga <= 0.0) {
                b = x;
            } else {
                a = x;
            }
            double next = (gp != 0.0) ? x - g / gp : 0.5 * (a + b);
            if (!(next > std::min(a, b) && next < std::max(a, b))) {
                next = 0.5 * (a + b);
            }
            if (std::abs(next - x) < 1e-14 * (1.0 + std::abs(x))) {
                x = next;
                break;
            }
            x = next;
        }
    }

    // chi = theta - theta0(. + x).
    const Field w0_s = spectral_shift(wall.w0, x);
    Field chi(grid);
    for (int j = 0; j < n; ++j) {
        const double xs = grid->x(j) + x;
        const double theta0_s = 0.5 * std::numbers::pi * std::tanh(xs) + w0_s[j];
        chi[j] = ref[j] + w_snapshot[j] - theta0_s;
    }
    return {x, chi};
}

std::vector<double> leading_order_Y(const StaticWall& wall, const Forcing& forcing, double nu,
                                    int n_samples) {
    const double T = forcing.period();
    const int m = n_samples;
    const double a = 2.0 / wall.norm_sq_dtheta0;

    // Fourier collocation: Y_k = a H_k / ((i w_k)^2 + nu i w_k), k != 0.
    std::vector<std::complex<double>> hk(m);
    for (int k = 0; k < m; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < m; ++j) {
            acc += forcing(T * j / m) * std::polar(1.0, -kTwoPi * k * j / m);
        }
        hk[k] = acc / static_cast<double>(m);
    }
    std::vector<std::complex<double>> yk(m, 0.0);
    for (int k = 1; k < m; ++k) {
        const int kk = (k <= m / 2) ? k : k - m;
        const std::complex<double> iw(0.0, kTwoPi * kk / T);
        yk[k] = a * hk[k] / (iw * iw + nu * iw);
    }
    std::vector<double> y(m, 0.0);
    for (int j = 0; j < m; ++j) {
        std::complex<double> acc = 0.0;
        for (int k = 0; k < m; ++k) {
            acc += yk[k] * std::polar(1.0, kTwoPi * k * j / m);
        }
        y[j] = acc.real();
    }
    const double pin = y[m / 2];  // Y(T/2) = 0
    for (double& v : y) v -= pin;
    return y;
}

namespace {

detail::DenseVector pack(const State& s) {
    detail::DenseVector out(2 * s.u.size());
    for (int j = 0; j < s.u.size(); ++j) {
        out[j] = s.u[j];
        out[s.u.size() + j] = s.v[j];
    }
    return out;
}

State unpack(const detail::DenseVector& x, const GridPtr& grid) {
    State s(grid);
    const int n = grid->N();
    for (int j = 0; j < n; ++j) {
        s.u[j] = x[j];
        s.v[j] = x[n + j];
    }
    return s;
}

}  // namespace

PeriodicWall find_periodic_wall(std::shared_ptr<const StaticWall> wall, double epsilon,
                                double T, const Forcing& forcing, double tol, int max_newton,
                                const OrbitSolveOptions& opt) {
    if (std::abs(epsilon) > opt.max_epsilon) {
        throw std::invalid_argument("epsilon outside the perturbative regime cap");
    }
    if (std::abs(forcing.period() - T) > 1e-12 * T) {
        throw std::invalid_argument("forcing period does not match T");
    }
    const GridPtr grid = wall->grid;
    const int n = grid->N();
    const int m_snap = opt.snapshots;

    // Time step: near T/1024, rounded so one period is a whole number of
    // steps and a multiple of the snapshot count.
    double dt = opt.dt > 0.0 ? opt.dt : T / 1024.0;
    int steps = static_cast<int>(std::lround(T / dt));
    steps = ((steps + m_snap - 1) / m_snap) * m_snap;
    dt = T / steps;

    PeriodicWall orbit;
    orbit.grid_ref = grid;
    orbit.epsilon = epsilon;
    orbit.T = T;
    orbit.nu = opt.nu;
    orbit.wall = wall;
    orbit.forcing = std::make_shared<Forcing>(forcing);

    const EnergyNorm znorm(*wall);
    auto z_defect = [&](const State& d) {
        return std::sqrt(std::max(0.0, znorm.norm_sq(d)));
    };

    EvolveContext ctx;
    ctx.epsilon = epsilon;
    ctx.nu = opt.nu;
    ctx.forcing = &forcing;
    auto period_map = [&](const State& s) {
        return evolve(s, 0.0, T, dt, ctx).final_state;
    };

    State s(grid);
    s.u = wall->w0;
    if (opt.initial_guess) s = *opt.initial_guess;

    if (epsilon == 0.0) {
        orbit.residual = 0.0;
        orbit.snapshots.assign(m_snap, s);
        orbit.X.assign(m_snap, 0.0);
        orbit.chi_norm.assign(m_snap, 0.0);
        return orbit;
    }

    // The orbit is the fixed point of the reflected half-period map
    // h(s) = R Phi_{0 -> T/2}(s): h^2 is the full period map, so fixed
    // points are genuine T-periodic orbits, and h selects the
    // T/2-symmetric representative of the translate family (the
    // linearization of h has eigenvalue -1, not +1, along translation, so
    // no phase border is needed).
    auto half_map = [&](const State& x) {
        return reflected(evolve(x, 0.0, 0.5 * T, dt, ctx).final_state);
    };

    State hs = half_map(s);
    State G = hs - s;
    double defect = z_defect(G);
    int newton = 0;
    std::vector<double> defect_history{defect};
    const double half_tol = 0.25 * tol;

    for (; newton < max_newton && defect > half_tol; ++newton) {
        const double s_norm = std::max(1.0, norm_l2(s));
        auto jacobian = [&](const detail::DenseVector& x) {
            State delta = unpack(x, grid);
            const double dn = norm_l2(delta);
            detail::DenseVector out(2 * n, 0.0);
            if (dn > 0.0) {
                const double eta = opt.fd_eps * s_norm / dn;
                State probe = s;
                State scaled = delta;
                scaled *= eta;
                probe += scaled;
                State jd = half_map(probe);
                jd -= hs;
                jd *= 1.0 / eta;
                jd -= delta;
                for (int j = 0; j < n; ++j) {
                    out[j] = jd.u[j];
                    out[n + j] = jd.v[j];
                }
            }
            return out;
        };

        detail::DenseVector rhs = pack(-1.0 * G);
        const double gmres_tol = std::min(0.1, 0.5 * std::sqrt(defect));
        auto sol = detail::gmres(jacobian, rhs, opt.krylov_dim, gmres_tol);
        State delta = unpack(sol.x, grid);

        // Accept with a halving safeguard.
        double step = 1.0;
        for (int bt = 0; bt < 4; ++bt) {
            State trial = s;
            State scaled = delta;
            scaled *= step;
            trial += scaled;
            State ht = half_map(trial);
            State Gt = ht - trial;
            const double trial_defect = z_defect(Gt);
            if (trial_defect < defect || bt == 3) {
                s = trial;
                hs = ht;
                G = Gt;
                defect = trial_defect;
                break;
            }
            step *= 0.5;
        }
        defect_history.push_back(defect);
    }

    if (defect > half_tol) {
        std::string hist = "periodic wall solve stalled; half-map defect history:";
        for (double d : defect_history) hist += " " + std::to_string(d);
        hist += " (consider smaller epsilon or finer dt)";
        throw NonConvergence(hist, newton, defect);
    }

    // Report the full Poincare defect.
    {
        const State ps = period_map(s);
        orbit.residual = z_defect(ps - s);
        if (orbit.residual > tol) {
            throw NonConvergence("period-map defect exceeds tolerance after half-map convergence",
                                 newton, orbit.residual);
        }
    }

    // Store one period of snapshots and the translation decomposition.
    const int per_snap = steps / m_snap;
    orbit.snapshots.clear();
    orbit.snapshots.reserve(m_snap);
    orbit.X.resize(m_snap);
    orbit.chi_norm.resize(m_snap);
    State cur = s;
    for (int i = 0; i < m_snap; ++i) {
        orbit.snapshots.push_back(cur);
        const double t0 = i * per_snap * dt;
        cur = evolve(cur, t0, t0 + per_snap * dt, dt, ctx).final_state;
    }
    for (int i = 0; i < m_snap; ++i) {
        auto [x, chi] = extract_translation(orbit.snapshots[i].u, *wall);
        orbit.X[i] = x;
        orbit.chi_norm[i] = norm_h1(chi);
    }
    return orbit;
}

}  // namespace neel
