#pragma once

#include <memory>
#include <vector>

#include "neel/dynamics.hpp"

namespace neel {

// One period of the converged oscillating wall. Snapshots hold (w, v) at
// the uniform times t_m = m T / M; the phase decomposition theta(x,t) =
// theta0(x + X(t)) + chi(x,t) is extracted per snapshot. The object also
// acts as the coefficient provider for the linearization around the orbit
// (cubic interpolation in t between snapshots).
class PeriodicWall : public CoefficientProvider {
public:
    GridPtr grid_ref;
    double epsilon = 0.0;
    double T = 0.0;
    double nu = 0.5;
    std::vector<State> snapshots;    // M states over one period
    std::vector<double> X;           // translation per snapshot
    std::vector<double> chi_norm;    // ||chi(.,t_m)||_{H1}
    double residual = 0.0;           // Poincare defect in the Z norm
    std::shared_ptr<const StaticWall> wall;
    std::shared_ptr<const Forcing> forcing;

    int n_snapshots() const { return static_cast<int>(snapshots.size()); }
    double snapshot_time(int m) const { return T * m / n_snapshots(); }

    // Cubic interpolation of the stored orbit.
    State state_at(double t) const;
    // The translation direction of the orbit at a snapshot time:
    // (dx theta, dt dx theta)(., t_m).
    State theta_bar_mode(int m) const;

    // CoefficientProvider around theta(.,t).
    GridPtr grid() const override { return grid_ref; }
    double period() const override { return T; }
    void eval(double t, Field& sin_theta, Field& c_coeff) const override;

    // Linear system d/dt s = A(t) s around the orbit. The returned object
    // references this wall; keep it alive while integrating.
    ASystem linear_system() const;
};

struct OrbitSolveOptions {
    double nu = 0.5;
    double dt = 0.0;           // 0: T/1024, rounded to a snapshot multiple
    int snapshots = 256;
    int krylov_dim = 60;
    double fd_eps = 1e-7;      // relative step of the directional derivative
    double max_epsilon = 0.05;
    const State* initial_guess = nullptr;  // continuation input
};

// Locates the T-periodic wall as a fixed point of the Poincare map in the
// (w, v) variables by matrix-free Newton-Krylov, formulated through the
// reflected half-period map h = R o Phi_{0,T/2} (h^2 is the period map).
// This picks the T/2-symmetric representative of the spatial-translate
// family and leaves the translation direction nonsingular (eigenvalue -1
// of Dh), so no phase border is required. At epsilon = 0 the static wall
// is returned exactly. The stored residual is the full period-map defect
// in the Z norm.
PeriodicWall find_periodic_wall(std::shared_ptr<const StaticWall> wall, double epsilon,
                                double T, const Forcing& forcing, double tol, int max_newton,
                                const OrbitSolveOptions& opt = {});

// Splits a phase snapshot theta = theta_ref + w into theta0(. + X) + chi:
// X solves <theta - theta0(.+X), dx theta0(.+X)> = 0 (nearest root to 0 by
// safeguarded Newton; NoRootInBracket beyond |X| = L/4), and chi is the
// remainder. Shifted profiles are evaluated spectrally (analytically for
// the reference part).
std::pair<double, Field> extract_translation(const Field& w_snapshot, const StaticWall& wall);

// The unique T-periodic solution of Y'' + nu Y' = 2 ||dx theta0||^{-2} H(t)
// pinned by Y(T/2) = 0, sampled at n uniform times (Fourier collocation).
std::vector<double> leading_order_Y(const StaticWall& wall, const Forcing& forcing, double nu,
                                    int n_samples = 256);

}  // namespace neel
