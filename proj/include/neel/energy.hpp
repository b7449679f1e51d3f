#pragma once

#include "neel/grid.hpp"

namespace neel {

// Phase representation used throughout: theta = ref.theta + w with a fixed
// reference profile and a decaying, box-periodic part w. The default (wall)
// reference is theta_ref(x) = (pi/2) tanh(x), which carries the -pi/2 ->
// +pi/2 winding so that every admissible wall phase has decaying w. The
// uniform reference theta == pi/2 covers the constant sector (used by the
// constant-coefficient checks). Reference derivatives are analytic: only w
// ever reaches a transform.
struct PhaseRef {
    Field theta;
    Field theta_dx;
    Field theta_dxx;

    static PhaseRef wall(const GridPtr& grid);
    static PhaseRef uniform(const GridPtr& grid);
};

Field reference_phase(const GridPtr& grid);      // (pi/2) tanh x
Field reference_phase_dx(const GridPtr& grid);   // (pi/2) sech^2 x
Field reference_phase_dxx(const GridPtr& grid);  // -pi sech^2 x tanh x

// E(theta) = 1/2 (||theta'||^2 + |cos theta|_{H^1/2}^2 + ||cos theta||^2),
// with the seminorm computed as 2L sum_k |xi_k| |c_k|^2 over the transform
// of cos theta.
double energy(const Field& w);
double energy(const Field& w, const PhaseRef& ref);

// grad E(theta) = -theta'' - sin(theta) (1 + (-Lap)^{1/2}) cos(theta);
// vanishing of this is the profile equation for the static wall.
Field energy_gradient(const Field& w);
Field energy_gradient(const Field& w, const PhaseRef& ref);

// Action of D^2 E(theta): u -> -u'' + sin(theta)(1+(-Lap)^{1/2})(u sin theta)
//                               - [cos(theta)(1+(-Lap)^{1/2})cos(theta)] u.
Field hessian_apply(const Field& w, const Field& u);
Field hessian_apply(const Field& w, const Field& u, const PhaseRef& ref);

// Same action with the theta-dependent coefficients computed once; used by
// iterative solvers that apply the Hessian many times at a fixed phase.
class HessianOperator {
public:
    explicit HessianOperator(const Field& w);
    HessianOperator(const Field& w, const PhaseRef& ref);
    Field apply(const Field& u) const;
    const Field& sin_theta() const { return sin_theta_; }
    const Field& c_coefficient() const { return c_coeff_; }

private:
    Field sin_theta_;
    Field c_coeff_;  // cos(theta) (1+(-Lap)^{1/2}) cos(theta)
};

}  // namespace neel
