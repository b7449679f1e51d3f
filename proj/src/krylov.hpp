#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace neel::detail {

using DenseVector = std::vector<double>;

inline double dot(const DenseVector& a, const DenseVector& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double nrm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const DenseVector& x, DenseVector& y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

struct GmresResult {
    DenseVector x;
    double rel_residual = 0.0;
    int iterations = 0;
};

// Unrestarted GMRES on a matrix-free operator, modified Gram-Schmidt with a
// single reorthogonalization pass. Stops at rel_tol or after max_dim basis
// vectors.
inline GmresResult gmres(const std::function<DenseVector(const DenseVector&)>& op,
                         const DenseVector& rhs, int max_dim, double rel_tol) {
    const size_t n = rhs.size();
    GmresResult result;
    result.x.assign(n, 0.0);

    const double beta = nrm2(rhs);
    if (beta == 0.0) return result;

    std::vector<DenseVector> basis;
    basis.reserve(max_dim + 1);
    DenseVector v0 = rhs;
    for (double& t : v0) t /= beta;
    basis.push_back(std::move(v0));

    std::vector<std::vector<double>> h(max_dim + 1, std::vector<double>(max_dim, 0.0));
    std::vector<double> cs(max_dim, 0.0), sn(max_dim, 0.0);
    std::vector<double> g(max_dim + 1, 0.0);
    g[0] = beta;

    int m = 0;
    for (int j = 0; j < max_dim; ++j) {
        DenseVector w = op(basis[j]);
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                const double hij = dot(w, basis[i]);
                h[i][j] += hij;
                axpy(-hij, basis[i], w);
            }
        }
        const double hnext = nrm2(w);
        h[j + 1][j] = hnext;
        if (hnext > 0.0) {
            for (double& t : w) t /= hnext;
            basis.push_back(std::move(w));
        }

        // Apply accumulated Givens rotations, then form the new one.
        for (int i = 0; i < j; ++i) {
            const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
            h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
            h[i][j] = t;
        }
        const double denom = std::hypot(h[j][j], h[j + 1][j]);
        cs[j] = denom == 0.0 ? 1.0 : h[j][j] / denom;
        sn[j] = denom == 0.0 ? 0.0 : h[j + 1][j] / denom;
        h[j][j] = denom;
        h[j + 1][j] = 0.0;
        g[j + 1] = -sn[j] * g[j];
        g[j] = cs[j] * g[j];

        m = j + 1;
        result.rel_residual = std::abs(g[j + 1]) / beta;
        if (result.rel_residual <= rel_tol || hnext == 0.0) break;
    }

    // Back substitution and solution assembly.
    std::vector<double> y(m, 0.0);
    for (int i = m - 1; i >= 0; --i) {
        double acc = g[i];
        for (int k = i + 1; k < m; ++k) acc -= h[i][k] * y[k];
        y[i] = h[i][i] == 0.0 ? 0.0 : acc / h[i][i];
    }
    for (int i = 0; i < m; ++i) axpy(y[i], basis[i], result.x);
    result.iterations = m;
    return result;
}

}  // namespace neel::detail
