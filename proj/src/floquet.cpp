#include "neel/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include "neel/errors.hpp"
#include "parallel.hpp"

namespace neel {

namespace {

double default_dt(const PeriodicWall& orbit, double dt) {
    if (dt > 0.0) return dt;
    return orbit.T / 1024.0;
}

std::uint64_t arnoldi_seed(std::uint64_t opt_seed) {
    if (opt_seed != 0) return opt_seed;
    if (const char* s = std::getenv("NEEL_SEED")) return std::strtoull(s, nullptr, 10);
    return 20250810ull;
}

}  // namespace

State monodromy_apply(const PeriodicWall& orbit, const State& s, double dt) {
    const ASystem sys = orbit.linear_system();
    return integrate_linear(s, 0.0, orbit.T, default_dt(orbit, dt), sys);
}

namespace {

struct RitzPair {
    std::complex<double> mu;
    Eigen::VectorXcd y;        // Hessenberg eigenvector
    double estimate = 0.0;     // Arnoldi residual estimate
};

// One Arnoldi pass of dimension m with full (two-pass) Gram-Schmidt.
struct ArnoldiData {
    std::vector<Eigen::VectorXd> basis;  // m (+1) orthonormal vectors
    Eigen::MatrixXd h;                   // (m+1) x m
    int m = 0;
    bool complete = false;               // happy breakdown: exact subspace
};

ArnoldiData arnoldi(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op,
                    const Eigen::VectorXd& start, int m) {
    const auto n = start.size();
    ArnoldiData data;
    data.h = Eigen::MatrixXd::Zero(m + 1, m);
    data.basis.push_back(start / start.norm());
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = op(data.basis[j]);
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                const double hij = w.dot(data.basis[i]);
                data.h(i, j) += hij;
                w -= hij * data.basis[i];
            }
        }
        const double hn = w.norm();
        data.h(j + 1, j) = hn;
        data.m = j + 1;
        if (hn < 1e-13 || data.m >= n) {
            data.complete = true;
            break;
        }
        data.basis.push_back(w / hn);
    }
    return data;
}

std::vector<RitzPair> ritz_pairs(const ArnoldiData& data) {
    const int m = data.m;
    const Eigen::MatrixXd hm = data.h.topLeftCorner(m, m);
    Eigen::EigenSolver<Eigen::MatrixXd> es(hm);
    std::vector<RitzPair> pairs(m);
    const double hnext = data.h(m, m - 1);
    for (int i = 0; i < m; ++i) {
        pairs[i].mu = es.eigenvalues()(i);
        pairs[i].y = es.eigenvectors().col(i);
        pairs[i].estimate = data.complete
                                ? 0.0
                                : hnext * std::abs(pairs[i].y(m - 1)) / pairs[i].y.norm();
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const RitzPair& a, const RitzPair& b) { return std::abs(a.mu) > std::abs(b.mu); });
    return pairs;
}

}  // namespace

FloquetResult floquet_multipliers(const PeriodicWall& orbit, int k, const FloquetOptions& opt) {
    if (k > 40) throw std::invalid_argument("floquet_multipliers: k must be <= 40");
    const GridPtr grid = orbit.grid_ref;
    const int n2 = 2 * grid->N();
    const double dt = default_dt(orbit, opt.dt);
    const ASystem sys = orbit.linear_system();

    auto op = [&](const Eigen::VectorXd& x) {
        State s(grid);
        const int n = grid->N();
        for (int j = 0; j < n; ++j) {
            s.u[j] = x(j);
            s.v[j] = x(n + j);
        }
        s = integrate_linear(std::move(s), 0.0, orbit.T, dt, sys);
        Eigen::VectorXd out(n2);
        for (int j = 0; j < n; ++j) {
            out(j) = s.u[j];
            out(n + j) = s.v[j];
        }
        return out;
    };

    std::mt19937_64 rng(arnoldi_seed(opt.seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd start(n2);
    for (int j = 0; j < n2; ++j) start(j) = gauss(rng);
    // Bias toward the translation direction so the unit multiplier is in
    // the subspace from the first pass.
    {
        const State mode = orbit.theta_bar_mode(0);
        const int n = grid->N();
        double scale = start.norm() / std::max(1e-30, norm_l2(mode));
        for (int j = 0; j < n; ++j) {
            start(j) += scale * mode.u[j];
            start(n + j) += scale * mode.v[j];
        }
    }

    int m = opt.subspace > 0 ? opt.subspace : std::max(3 * k, 36);
    m = std::min(m, n2);

    ArnoldiData data;
    std::vector<RitzPair> pairs;
    double best_unit_residual = 1e30;
    for (int attempt = 0; ; ++attempt) {
        data = arnoldi(op, start, m);
        pairs = ritz_pairs(data);
        // Residual estimate of the Ritz value nearest 1.
        best_unit_residual = 1e30;
        for (const auto& p : pairs) {
            if (std::abs(p.mu - 1.0) < 0.1) {
                best_unit_residual = std::min(best_unit_residual, p.estimate);
            }
        }
        if (best_unit_residual <= opt.lock_tol || data.complete) break;
        if (attempt >= opt.max_restarts) {
            throw ArnoldiStagnation("unit Floquet multiplier did not lock", 0, k,
                                    best_unit_residual);
        }
        m = std::min(n2, (3 * m) / 2);
    }

    FloquetResult result;
    result.epsilon = orbit.epsilon;
    int found = std::min<int>(k, static_cast<int>(pairs.size()));
    // Keep conjugate pairs together across the truncation boundary.
    if (found < static_cast<int>(pairs.size()) && found > 0 &&
        std::abs(pairs[found - 1].mu.imag()) > 1e-12 &&
        std::abs(pairs[found].mu - std::conj(pairs[found - 1].mu)) <
            1e-10 * (1.0 + std::abs(pairs[found].mu))) {
        ++found;
    }

    // Assemble Ritz vectors and true residuals for the reported pairs.
    const int m_used = data.m;
    auto ritz_vector = [&](const RitzPair& p) {
        Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(n2);
        for (int i = 0; i < m_used; ++i) {
            phi += p.y(i) * data.basis[i].cast<std::complex<double>>();
        }
        return phi;
    };

    int unit_index = 0;
    for (int i = 0; i < found; ++i) {
        result.multipliers.push_back(pairs[i].mu);
        const Eigen::VectorXcd phi = ritz_vector(pairs[i]);
        const Eigen::VectorXd re = phi.real();
        const Eigen::VectorXd im = phi.imag();
        Eigen::VectorXcd mphi(n2);
        const double im_norm = im.norm();
        if (im_norm > 1e-14 * re.norm()) {
            const Eigen::VectorXd mre = op(re);
            const Eigen::VectorXd mim = op(im);
            for (int j = 0; j < n2; ++j) mphi(j) = std::complex<double>(mre(j), mim(j));
        } else {
            const Eigen::VectorXd mre = op(re);
            for (int j = 0; j < n2; ++j) mphi(j) = mre(j);
        }
        const double resid = (mphi - pairs[i].mu * phi).norm() / phi.norm();
        result.residuals.push_back(resid);
        if (std::abs(pairs[i].mu - 1.0) < std::abs(pairs[unit_index].mu - 1.0)) {
            unit_index = i;
        }
    }

    // Eigenvector of the near-unit multiplier (real by construction).
    {
        const Eigen::VectorXcd phi = ritz_vector(pairs[unit_index]);
        const Eigen::VectorXd re = phi.real();
        State uv(grid);
        const int n = grid->N();
        for (int j = 0; j < n; ++j) {
            uv.u[j] = re(j);
            uv.v[j] = re(n + j);
        }
        const double nrm = norm_l2(uv);
        if (nrm > 0.0) uv *= 1.0 / nrm;
        result.unit_vector = std::move(uv);
    }

    result.unit_multiplier_error = std::abs(result.multipliers.front() - 1.0);
    result.second_modulus =
        result.multipliers.size() > 1 ? std::abs(result.multipliers[1]) : 0.0;

    int near_unit = 0;
    for (const auto& mu : result.multipliers) {
        if (std::abs(mu - 1.0) <= 1e-3) ++near_unit;
    }
    result.unit_multiplier_simple = (near_unit == 1);
    result.stable = (result.unit_multiplier_error <= 1e-5) && (result.second_modulus < 1.0) &&
                    result.unit_multiplier_simple;
    return result;
}

Eigen::MatrixXd dense_monodromy(const PeriodicWall& orbit, double dt, int dense_cap) {
    const GridPtr grid = orbit.grid_ref;
    const int n = grid->N();
    if (n > dense_cap) throw DenseCapExceeded(n, dense_cap);
    const ASystem sys = orbit.linear_system();
    const double step = default_dt(orbit, dt);

    std::vector<State> columns;
    columns.reserve(2 * n);
    for (int c = 0; c < 2 * n; ++c) {
        State e(grid);
        if (c < n) {
            e.u[c] = 1.0;
        } else {
            e.v[c - n] = 1.0;
        }
        columns.push_back(std::move(e));
    }
    integrate_linear_block(columns, 0.0, orbit.T, step, sys);

    Eigen::MatrixXd m(2 * n, 2 * n);
    for (int c = 0; c < 2 * n; ++c) {
        for (int j = 0; j < n; ++j) {
            m(j, c) = columns[c].u[j];
            m(n + j, c) = columns[c].v[j];
        }
    }
    return m;
}

std::vector<PerturbationEntry> perturbation_norm_sweep(
    std::shared_ptr<const StaticWall> wall, const Forcing& forcing, double T,
    const std::vector<double>& eps_list, const SweepOptions& opt) {
    OrbitSolveOptions orbit_opt;
    orbit_opt.nu = opt.nu;

    const PeriodicWall base = find_periodic_wall(wall, 0.0, T, forcing, opt.tol_orbit,
                                                 opt.max_newton, orbit_opt);
    const Eigen::MatrixXd m0 = dense_monodromy(base, opt.dt, opt.dense_cap);

    std::vector<double> sorted = eps_list;
    std::sort(sorted.begin(), sorted.end());

    std::vector<PerturbationEntry> table;
    State guess(wall->grid);
    guess.u = wall->w0;
    for (double eps : sorted) {
        orbit_opt.initial_guess = &guess;
        const PeriodicWall orbit =
            find_periodic_wall(wall, eps, T, forcing, opt.tol_orbit, opt.max_newton, orbit_opt);
        guess = orbit.snapshots[0];
        const Eigen::MatrixXd diff = dense_monodromy(orbit, opt.dt, opt.dense_cap) - m0;
        // Largest singular value through the symmetric eigenproblem of D^T D.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff.transpose() * diff,
                                                          Eigen::EigenvaluesOnly);
        table.push_back({eps, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()))});
    }
    return table;
}

}  // namespace neel
