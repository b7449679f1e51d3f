#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "neel/periodic_orbit.hpp"

namespace neel {

// Leading Floquet multipliers of the monodromy operator around a periodic
// wall, with the derived stability verdict. Multipliers are sorted by
// modulus descending; residuals are true ||M phi - mu phi|| / ||phi||.
//
// With constant damping the nontrivial spectrum fills a circle of radius
// ~exp(-nu T / 2) (every underdamped pair shares that modulus), so beyond
// the isolated multipliers only the radius of the cluster is resolvable by
// a Krylov method; residuals of unconverged ring Ritz values are reported
// honestly and second_modulus acts as the deflated spectral-radius
// estimate the verdict relies on.
struct FloquetResult {
    double epsilon = 0.0;
    // One extra entry may be appended when the k-th multiplier is one half
    // of a complex pair, so the list stays closed under conjugation.
    std::vector<std::complex<double>> multipliers;
    std::vector<double> residuals;
    State unit_vector;                   // eigenvector of the near-unit multiplier
    double unit_multiplier_error = 0.0;  // | mu_1 - 1 |
    double second_modulus = 0.0;         // deflated spectral radius estimate
    bool unit_multiplier_simple = true;  // exactly one multiplier within 1e-3 of 1
    bool stable = false;
};

// Propagator of the linearization over one full period: equals step_linear
// composed over [0, T].
State monodromy_apply(const PeriodicWall& orbit, const State& s, double dt = 0.0);

struct FloquetOptions {
    double dt = 0.0;        // period integration step (default T/1024)
    int subspace = 0;       // Arnoldi dimension (default max(3k, 36))
    int max_restarts = 4;   // subspace regrowth attempts for the unit pair
    double lock_tol = 1e-6; // residual demanded of the unit multiplier
    std::uint64_t seed = 0; // start-vector seed (0: NEEL_SEED or default)
};

// k leading multipliers by modulus via matrix-free Arnoldi on
// monodromy_apply. Throws ArnoldiStagnation when the unit multiplier fails
// to lock within the restart budget.
FloquetResult floquet_multipliers(const PeriodicWall& orbit, int k,
                                  const FloquetOptions& opt = {});

// Dense 2N x 2N monodromy matrix assembled column-by-column (oracle use;
// capped at N <= dense_cap).
Eigen::MatrixXd dense_monodromy(const PeriodicWall& orbit, double dt = 0.0,
                                int dense_cap = 512);

struct PerturbationEntry {
    double epsilon = 0.0;
    double norm = 0.0;  // ||M_eps - M_0||_2
};

struct SweepOptions {
    double nu = 0.5;
    double dt = 0.0;
    int dense_cap = 512;
    double tol_orbit = 1e-9;
    int max_newton = 12;
};

// Operator-norm distance of the monodromy from its static counterpart over
// an epsilon sweep (dense assembly; orbits are continued in epsilon).
std::vector<PerturbationEntry> perturbation_norm_sweep(
    std::shared_ptr<const StaticWall> wall, const Forcing& forcing, double T,
    const std::vector<double>& eps_list, const SweepOptions& opt = {});

}  // namespace neel
