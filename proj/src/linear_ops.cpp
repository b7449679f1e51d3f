#include "neel/linear_ops.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "neel/errors.hpp"
#include "parallel.hpp"

namespace neel {

State::State(Field u_, Field v_) : u(std::move(u_)), v(std::move(v_)) {
    if (!u.grid() || !v.grid() || *u.grid() != *v.grid()) {
        throw std::invalid_argument("state components live on different grids");
    }
}

State& State::operator+=(const State& o) {
    u += o.u;
    v += o.v;
    return *this;
}

State& State::operator-=(const State& o) {
    u -= o.u;
    v -= o.v;
    return *this;
}

State& State::operator*=(double a) {
    u *= a;
    v *= a;
    return *this;
}

double inner(const State& a, const State& b) { return inner(a.u, b.u) + inner(a.v, b.v); }

double norm_l2(const State& s) { return std::sqrt(inner(s, s)); }

State reflected(const State& s) {
    State out(s.grid());
    for (int j = 0; j < s.u.size(); ++j) {
        const int r = s.grid()->reflect(j);
        out.u[j] = -s.u[r];
        out.v[j] = -s.v[r];
    }
    return out;
}

L0Operator::L0Operator(const StaticWall& wall) : grid_(wall.grid), hess_(wall.w0) {}

Field L0Operator::apply(const Field& u) const { return hess_.apply(u); }

Field apply_L0(const StaticWall& wall, const Field& u) { return L0Operator(wall).apply(u); }

StaticCoefficients::StaticCoefficients(const StaticWall& wall)
    : grid_(wall.grid), sin_theta_(wall.grid), c_coeff_(wall.grid) {
    const HessianOperator hess(wall.w0);
    sin_theta_ = hess.sin_theta();
    c_coeff_ = hess.c_coefficient();
}

void StaticCoefficients::eval(double, Field& sin_theta, Field& c_coeff) const {
    sin_theta = sin_theta_;
    c_coeff = c_coeff_;
}

// L(t) u given the coefficient fields.
Field apply_L_coefficients(const Field& sin_theta, const Field& c_coeff, const Field& u) {
    const int n = u.size();
    Field su(u.grid());
    for (int j = 0; j < n; ++j) su[j] = sin_theta[j] * u[j];
    Field ksu = half_laplacian(su);
    ksu += su;
    Field out = second_derivative(u);
    for (int j = 0; j < n; ++j) {
        out[j] = -out[j] + sin_theta[j] * ksu[j] - c_coeff[j] * u[j];
    }
    return out;
}

State apply_A(double t, const State& s, const ASystem& sys) {
    if (!sys.coeffs) throw std::invalid_argument("ASystem without coefficients");
    Field sin_theta(s.grid());
    Field c_coeff(s.grid());
    sys.coeffs->eval(t, sin_theta, c_coeff);

    State out(s.grid());
    out.u = s.v;
    Field lu = apply_L_coefficients(sin_theta, c_coeff, s.u);
    const double eh = sys.epsilon * sys.H(t);
    for (int j = 0; j < s.u.size(); ++j) {
        out.v[j] = -lu[j] - eh * sin_theta[j] * s.u[j] - sys.nu * s.v[j];
    }
    return out;
}

namespace {

Eigen::MatrixXd assemble_columns(const GridPtr& grid, int dim,
                                 const std::function<void(int, double*)>& column) {
    Eigen::MatrixXd m(dim, dim);
    detail::parallel_for(dim, [&](int c) { column(c, m.col(c).data()); });
    return m;
}

}  // namespace

OperatorMatrix assemble_matrix(OperatorKind kind, const StaticWall& wall, double nu,
                               int dense_cap) {
    const GridPtr& grid = wall.grid;
    const int n = grid->N();
    OperatorMatrix out;
    out.grid = grid;
    out.kind = kind;

    if (kind == OperatorKind::L0) {
        if (n > 8192) throw DenseCapExceeded(n, 8192);
        const L0Operator l0(wall);
        out.entries = assemble_columns(grid, n, [&](int c, double* col) {
            Field e(grid);
            e[c] = 1.0;
            const Field le = l0.apply(e);
            for (int r = 0; r < n; ++r) col[r] = le[r];
        });
        return out;
    }
    if (kind == OperatorKind::A0) {
        if (n > dense_cap) throw DenseCapExceeded(n, dense_cap);
        const StaticCoefficients coeffs(wall);
        ASystem sys;
        sys.coeffs = &coeffs;
        sys.nu = nu;
        return assemble_matrix(OperatorKind::A0, sys, 0.0, dense_cap);
    }
    throw std::invalid_argument("time-dependent assembly needs an ASystem context");
}

OperatorMatrix assemble_matrix(OperatorKind kind, const ASystem& sys, double t, int dense_cap) {
    const GridPtr grid = sys.coeffs->grid();
    const int n = grid->N();
    OperatorMatrix out;
    out.grid = grid;
    out.kind = kind;
    out.time = t;

    Field sin_theta(grid);
    Field c_coeff(grid);
    sys.coeffs->eval(t, sin_theta, c_coeff);

    if (kind == OperatorKind::Lbar || kind == OperatorKind::L0) {
        if (n > 8192) throw DenseCapExceeded(n, 8192);
        out.entries = assemble_columns(grid, n, [&](int c, double* col) {
            Field e(grid);
            e[c] = 1.0;
            const Field le = apply_L_coefficients(sin_theta, c_coeff, e);
            for (int r = 0; r < n; ++r) col[r] = le[r];
        });
        return out;
    }

    // A-type: [[0, I], [-L - eps H sin(theta), -nu I]]; the forcing term is
    // a pointwise multiplication, hence diagonal.
    if (n > dense_cap) throw DenseCapExceeded(n, dense_cap);
    const double eh = sys.epsilon * sys.H(t);
    out.entries = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    Eigen::MatrixXd lower(n, n);
    detail::parallel_for(n, [&](int c) {
        Field e(grid);
        e[c] = 1.0;
        const Field le = apply_L_coefficients(sin_theta, c_coeff, e);
        for (int r = 0; r < n; ++r) {
            lower(r, c) = -le[r] - (r == c ? eh * sin_theta[r] : 0.0);
        }
    });
    out.entries.block(0, n, n, n).setIdentity();
    out.entries.block(n, 0, n, n) = lower;
    out.entries.block(n, n, n, n) = -sys.nu * Eigen::MatrixXd::Identity(n, n);
    return out;
}

std::vector<EigenPair> smallest_eigenpairs(const OperatorMatrix& m, int k) {
    if (m.kind != OperatorKind::L0 && m.kind != OperatorKind::Lbar) {
        throw std::invalid_argument("smallest_eigenpairs expects an L-type matrix");
    }
    if (k > 20) throw std::invalid_argument("smallest_eigenpairs: k must be <= 20");
    const int n = m.grid->N();
    const Eigen::MatrixXd sym = 0.5 * (m.entries + m.entries.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
        throw Error("dense symmetric eigensolve failed");
    }

    std::vector<EigenPair> out;
    out.reserve(k);
    const double dx = m.grid->dx();
    for (int i = 0; i < k && i < n; ++i) {
        EigenPair p;
        p.lambda = es.eigenvalues()(i);
        Eigen::VectorXd v = es.eigenvectors().col(i);
        // With v unit in the Euclidean norm, the discrete-L2 residual of the
        // L2-normalized eigenvector equals the plain Euclidean residual.
        const Eigen::VectorXd r = m.entries * v - p.lambda * v;
        p.residual = r.norm();
        v /= std::sqrt(dx);  // unit discrete-L2 norm
        Field phi(m.grid);
        for (int j = 0; j < n; ++j) phi[j] = v(j);
        p.phi = std::move(phi);
        out.push_back(std::move(p));
    }
    return out;
}

Eigen::VectorXcd a_matrix_eigenvalues(const OperatorMatrix& m) {
    if (m.kind != OperatorKind::A0 && m.kind != OperatorKind::At) {
        throw std::invalid_argument("a_matrix_eigenvalues expects an A-type matrix");
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.entries, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw Error("dense eigensolve of the block operator failed");
    }
    return es.eigenvalues();
}

std::vector<std::complex<double>> block_roots_from_l0(const std::vector<double>& l0_eigenvalues,
                                                      double nu) {
    std::vector<std::complex<double>> roots;
    roots.reserve(2 * l0_eigenvalues.size());
    for (double lam : l0_eigenvalues) {
        const std::complex<double> disc =
            std::sqrt(std::complex<double>(nu * nu - 4.0 * lam, 0.0));
        roots.push_back(0.5 * (-nu + disc));
        roots.push_back(0.5 * (-nu - disc));
    }
    return roots;
}

GapReport spectral_gap(const std::vector<double>& l0_eigenvalues, double nu) {
    GapReport rep;
    rep.lambda0 = l0_eigenvalues.empty() ? 0.0 : l0_eigenvalues.front();
    double zeta = std::numeric_limits<double>::infinity();
    bool first_positive = true;
    for (double lam : l0_eigenvalues) {
        if (std::abs(lam) <= 1e-6) continue;  // translation pair {0, -nu}
        if (first_positive) {
            rep.big_lambda0 = lam;
            first_positive = false;
        }
        const double disc = nu * nu - 4.0 * lam;
        if (disc < 0.0) {
            zeta = std::min(zeta, 0.5 * nu);
        } else {
            zeta = std::min(zeta, 0.5 * (nu - std::sqrt(disc)));
        }
    }
    rep.zeta = zeta;
    rep.at_half_nu = std::abs(zeta - 0.5 * nu) < 1e-12;
    return rep;
}

EnergyNorm::EnergyNorm(const StaticWall& wall) : l0_(wall) {}

double EnergyNorm::u_quadratic(const Field& u) const { return inner(l0_.apply(u), u); }

double EnergyNorm::norm_sq(const State& s) const {
    return u_quadratic(s.u) + norm_sq_l2(s.v);
}

}  // namespace neel
