#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "neel/static_wall.hpp"

namespace neel {

// One point of the first-order dynamics: u is the phase perturbation and
// v = du/dt. Both live on the same grid.
struct State {
    Field u;
    Field v;

    State() = default;
    State(Field u_, Field v_);
    explicit State(const GridPtr& grid) : u(grid), v(grid) {}

    const GridPtr& grid() const { return u.grid(); }
    State& operator+=(const State& o);
    State& operator-=(const State& o);
    State& operator*=(double a);
    friend State operator+(State a, const State& b) { a += b; return a; }
    friend State operator-(State a, const State& b) { a -= b; return a; }
    friend State operator*(double a, State s) { s *= a; return s; }
};

double inner(const State& a, const State& b);  // L2 x L2 pair inner product
double norm_l2(const State& s);

// The parity-reversal (x -> -x, sign flip) on both components; the spatial
// part of the half-period orbit symmetry.
State reflected(const State& s);

// L0 u = -u'' + sin(theta0)(1+(-Lap)^{1/2})(u sin theta0) - c_{theta0} u,
// with the theta0-dependent coefficients cached at construction.
class L0Operator {
public:
    explicit L0Operator(const StaticWall& wall);
    Field apply(const Field& u) const;
    const Field& sin_theta0() const { return hess_.sin_theta(); }
    const Field& c_theta0() const { return hess_.c_coefficient(); }
    const GridPtr& grid() const { return grid_; }

private:
    GridPtr grid_;
    HessianOperator hess_;
};

Field apply_L0(const StaticWall& wall, const Field& u);

// Time-periodic linearization coefficients: sin(theta(.,t)) and
// c_theta(.,t) = cos(theta)(1+(-Lap)^{1/2})cos(theta). Constant providers
// report period() == 0. eval() must be safe to call concurrently.
class CoefficientProvider {
public:
    virtual ~CoefficientProvider() = default;
    virtual GridPtr grid() const = 0;
    virtual double period() const = 0;
    virtual void eval(double t, Field& sin_theta, Field& c_coeff) const = 0;
};

// Frozen coefficients of the static wall (the epsilon = 0 linearization).
class StaticCoefficients : public CoefficientProvider {
public:
    explicit StaticCoefficients(const StaticWall& wall);
    GridPtr grid() const override { return grid_; }
    double period() const override { return 0.0; }
    void eval(double t, Field& sin_theta, Field& c_coeff) const override;

private:
    GridPtr grid_;
    Field sin_theta_;
    Field c_coeff_;
};

// The first-order system  d/dt (u,v) = A(t)(u,v) with
//   A(t) = [[0, I], [-L(t) - eps H(t) sin(theta(t)), -nu I]].
// The damping block is -nu I (dissipative sign).
struct ASystem {
    const CoefficientProvider* coeffs = nullptr;
    double epsilon = 0.0;
    double nu = 0.5;
    std::function<double(double)> field = {};  // H(t); empty means H == 0

    double H(double t) const { return field ? field(t) : 0.0; }
};

// L(t)-type action from explicit coefficient fields:
// u -> -u'' + s (1+(-Lap)^{1/2})(s u) - c u.
Field apply_L_coefficients(const Field& sin_theta, const Field& c_coeff, const Field& u);

// Action of A(t) on a state; the first output component is exactly v.
State apply_A(double t, const State& s, const ASystem& sys);

enum class OperatorKind { L0, Lbar, A0, At };

struct OperatorMatrix {
    GridPtr grid;
    OperatorKind kind = OperatorKind::L0;
    double time = 0.0;
    Eigen::MatrixXd entries;  // N x N for L-type, 2N x 2N for A-type
};

// Dense assembly column-by-column from the matrix-free applies; columns are
// independent and are processed in parallel (capped by NEEL_THREADS).
// A-type assembly is limited to N <= dense_cap (DenseCapExceeded otherwise).
OperatorMatrix assemble_matrix(OperatorKind kind, const StaticWall& wall, double nu = 0.5,
                               int dense_cap = 2048);
OperatorMatrix assemble_matrix(OperatorKind kind, const ASystem& sys, double t,
                               int dense_cap = 2048);

struct EigenPair {
    double lambda = 0.0;
    Field phi;              // L2-normalized
    double residual = 0.0;  // ||L0 phi - lambda phi||_{L2}
};

// k smallest eigenpairs of an assembled L-type matrix, ascending.
std::vector<EigenPair> smallest_eigenpairs(const OperatorMatrix& m, int k);

// Full spectrum of an assembled A-type matrix.
Eigen::VectorXcd a_matrix_eigenvalues(const OperatorMatrix& m);

// Quadratic-root model of the block spectrum: every eigenvalue lambda_L of
// L0 contributes the two roots of z^2 + nu z + lambda_L = 0.
std::vector<std::complex<double>> block_roots_from_l0(const std::vector<double>& l0_eigenvalues,
                                                      double nu);

// Observed spectral gap of A0: minimum of -Re z over the nontrivial roots
// (the translation pair {0, -nu} excluded).
struct GapReport {
    double lambda0 = 0.0;     // near-zero L0 eigenvalue
    double big_lambda0 = 0.0; // first positive L0 eigenvalue
    double zeta = 0.0;        // observed decay gap
    bool at_half_nu = false;  // zeta == nu/2 within 1e-12 (underdamped ring)
};
GapReport spectral_gap(const std::vector<double>& l0_eigenvalues, double nu);

// Energy (Z) inner product <u, L0 u> + <v, v>; nonnegative on states with u
// orthogonal to the translation mode, degenerate exactly along it.
class EnergyNorm {
public:
    explicit EnergyNorm(const StaticWall& wall);
    double norm_sq(const State& s) const;
    double u_quadratic(const Field& u) const;  // <u, L0 u>
    const L0Operator& l0() const { return l0_; }

private:
    L0Operator l0_;
};

}  // namespace neel
