#pragma once

#include <vector>

#include "neel/energy.hpp"
#include "neel/errors.hpp"
#include "neel/grid.hpp"

namespace neel {

// Converged static wall phase theta0 = theta_ref + w0: the energy minimizer
// centered at the origin (odd, monotone increasing).
struct StaticWall {
    GridPtr grid;
    Field w0;                  // decaying part of theta0
    Field dtheta0;             // translation mode d/dx theta0
    // Final ||grad E||_{L2} over the free degrees of freedom (odd w). The
    // seam node x = -L is the periodic image of +-infinity and acts as a
    // pinned boundary value; the unprojected gradient keeps an O(1/L^2)
    // single-node truncation artifact there.
    double residual = 0.0;
    double energy_value = 0.0;
    double norm_sq_dtheta0 = 0.0;

    Field theta0() const;
};

struct StaticSolveOptions {
    double tol = 1e-8;
    int max_iter = 400;
    // Preconditioned descent sweeps before switching to Newton polish.
    int descent_iters = 50;
    // When set, receives the energy after every accepted outer iteration.
    std::vector<double>* energy_history = nullptr;
};

// Minimizes the wall energy over odd decaying w starting from w = 0.
// Preconditioned gradient descent followed by a Newton polish with a
// conjugate-gradient inner solve restricted to the odd subspace (the
// translation zero mode is even, so it is projected out structurally).
// Throws NonConvergence if the gradient norm stays above tol.
StaticWall solve_static_profile(const GridPtr& grid, double tol, int max_iter);
StaticWall solve_static_profile(const GridPtr& grid, const StaticSolveOptions& opt);

// The zero-mode direction d/dx theta0 (positive, even).
Field translation_mode(const StaticWall& wall);

}  // namespace neel
