#include "neel/energy.hpp"

#include <cmath>
#include <numbers>

namespace neel {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Field one_plus_half_laplacian(const Field& f) {
    Field g = half_laplacian(f);
    g += f;
    return g;
}

}  // namespace

Field reference_phase(const GridPtr& grid) {
    Field f(grid);
    for (int j = 0; j < grid->N(); ++j) f[j] = kHalfPi * std::tanh(grid->x(j));
    return f;
}

Field reference_phase_dx(const GridPtr& grid) {
    Field f(grid);
    for (int j = 0; j < grid->N(); ++j) {
        const double s = 1.0 / std::cosh(grid->x(j));
        f[j] = kHalfPi * s * s;
    }
    return f;
}

Field reference_phase_dxx(const GridPtr& grid) {
    Field f(grid);
    for (int j = 0; j < grid->N(); ++j) {
        const double x = grid->x(j);
        const double s = 1.0 / std::cosh(x);
        f[j] = -std::numbers::pi * s * s * std::tanh(x);
    }
    return f;
}

PhaseRef PhaseRef::wall(const GridPtr& grid) {
    return PhaseRef{reference_phase(grid), reference_phase_dx(grid), reference_phase_dxx(grid)};
}

PhaseRef PhaseRef::uniform(const GridPtr& grid) {
    Field theta(grid);
    for (int j = 0; j < grid->N(); ++j) theta[j] = kHalfPi;
    return PhaseRef{theta, Field(grid), Field(grid)};
}

double energy(const Field& w) { return energy(w, PhaseRef::wall(w.grid())); }

double energy(const Field& w, const PhaseRef& ref) {
    const GridPtr& grid = w.grid();
    const int n = w.size();

    Field dtheta = derivative(w);
    dtheta += ref.theta_dx;

    Field cos_theta(grid);
    for (int j = 0; j < n; ++j) cos_theta[j] = std::cos(ref.theta[j] + w[j]);

    const SpectralField ch = forward_transform(cos_theta);
    const auto& xi = grid->xi();
    double seminorm = 0.0;
    double l2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double a = std::norm(ch[k]);
        seminorm += std::abs(xi[k]) * a;
        l2 += a;
    }
    const double two_l = 2.0 * grid->L();
    return 0.5 * (norm_sq_l2(dtheta) + two_l * (seminorm + l2));
}

Field energy_gradient(const Field& w) { return energy_gradient(w, PhaseRef::wall(w.grid())); }

Field energy_gradient(const Field& w, const PhaseRef& ref) {
    const GridPtr& grid = w.grid();
    const int n = w.size();

    Field cos_theta(grid);
    Field sin_theta(grid);
    for (int j = 0; j < n; ++j) {
        const double th = ref.theta[j] + w[j];
        cos_theta[j] = std::cos(th);
        sin_theta[j] = std::sin(th);
    }

    Field grad = second_derivative(w);
    grad += ref.theta_dxx;
    const Field kc = one_plus_half_laplacian(cos_theta);
    for (int j = 0; j < n; ++j) {
        grad[j] = -grad[j] - sin_theta[j] * kc[j];
    }
    return grad;
}

Field hessian_apply(const Field& w, const Field& u) {
    return hessian_apply(w, u, PhaseRef::wall(w.grid()));
}

Field hessian_apply(const Field& w, const Field& u, const PhaseRef& ref) {
    const GridPtr& grid = w.grid();
    const int n = w.size();

    Field cos_theta(grid);
    Field sin_theta(grid);
    for (int j = 0; j < n; ++j) {
        const double th = ref.theta[j] + w[j];
        cos_theta[j] = std::cos(th);
        sin_theta[j] = std::sin(th);
    }

    Field su(grid);
    for (int j = 0; j < n; ++j) su[j] = sin_theta[j] * u[j];
    const Field ksu = one_plus_half_laplacian(su);
    const Field kc = one_plus_half_laplacian(cos_theta);

    Field out = second_derivative(u);
    for (int j = 0; j < n; ++j) {
        out[j] = -out[j] + sin_theta[j] * ksu[j] - cos_theta[j] * kc[j] * u[j];
    }
    return out;
}

HessianOperator::HessianOperator(const Field& w)
    : HessianOperator(w, PhaseRef::wall(w.grid())) {}

HessianOperator::HessianOperator(const Field& w, const PhaseRef& ref)
    : sin_theta_(w.grid()), c_coeff_(w.grid()) {
    const GridPtr& grid = w.grid();
    Field cos_theta(grid);
    for (int j = 0; j < w.size(); ++j) {
        const double th = ref.theta[j] + w[j];
        cos_theta[j] = std::cos(th);
        sin_theta_[j] = std::sin(th);
    }
    const Field kc = one_plus_half_laplacian(cos_theta);
    for (int j = 0; j < w.size(); ++j) c_coeff_[j] = cos_theta[j] * kc[j];
}

Field HessianOperator::apply(const Field& u) const {
    const int n = u.size();
    Field su(u.grid());
    for (int j = 0; j < n; ++j) su[j] = sin_theta_[j] * u[j];
    const Field ksu = one_plus_half_laplacian(su);

    Field out = second_derivative(u);
    for (int j = 0; j < n; ++j) {
        out[j] = -out[j] + sin_theta_[j] * ksu[j] - c_coeff_[j] * u[j];
    }
    return out;
}

}  // namespace neel
