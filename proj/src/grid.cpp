#include "neel/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace neel {

namespace {

void check_same_grid(const Field& a, const Field& b) {
    if (!a.grid() || !b.grid() || *a.grid() != *b.grid()) {
        throw std::invalid_argument("fields live on different grids");
    }
}

// FFTW's planner is not thread-safe; executions on distinct buffers are.
// Each thread keeps its own plans and workspace per transform size.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftWorkspace {
    int n = 0;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    // Node offset phases: mode amplitudes c_k (for exp(i xi_k x)) relate to
    // plain DFT coefficients b_k through c_k = b_k * conj(phase_k) with
    // phase_k = exp(i xi_k x_0) = (-1)^k exp(i pi k~ / N), k~ the signed
    // harmonic index.
    std::vector<std::complex<double>> phase;

    ~FftWorkspace() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
};

FftWorkspace& workspace_for(int n) {
    thread_local std::unordered_map<int, std::unique_ptr<FftWorkspace>> cache;
    auto& slot = cache[n];
    if (!slot) {
        auto ws = std::make_unique<FftWorkspace>();
        ws->n = n;
        ws->in = fftw_alloc_complex(n);
        ws->out = fftw_alloc_complex(n);
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            ws->fwd = fftw_plan_dft_1d(n, ws->in, ws->out, FFTW_FORWARD, FFTW_ESTIMATE);
            ws->bwd = fftw_plan_dft_1d(n, ws->in, ws->out, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        ws->phase.resize(n);
        for (int k = 0; k < n; ++k) {
            const int signed_k = (k < n / 2) ? k : k - n;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            ws->phase[k] = sign * std::polar(1.0, std::numbers::pi * signed_k / n);
        }
        slot = std::move(ws);
    }
    return *slot;
}

}  // namespace

Grid::Grid(double half_width, int n_points) : L_(half_width), N_(n_points) {
    if (!(half_width > 0.0)) throw std::invalid_argument("grid half width must be positive");
    if (n_points < 16 || n_points % 2 != 0) {
        throw std::invalid_argument("grid size must be even and >= 16");
    }
    dx_ = 2.0 * L_ / N_;
    xi_.resize(N_);
    const double base = std::numbers::pi / L_;
    for (int k = 0; k < N_; ++k) {
        const int signed_k = (k < N_ / 2) ? k : k - N_;
        xi_[k] = base * signed_k;
    }
}

double Grid::xi_max() const { return std::numbers::pi / dx_; }

GridPtr make_grid(double half_width, int n_points) {
    return std::make_shared<const Grid>(half_width, n_points);
}

Field::Field(GridPtr grid) : grid_(std::move(grid)), values_(grid_->N(), 0.0) {}

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_->N()) {
        throw std::invalid_argument("field length does not match grid");
    }
}

Field& Field::operator+=(const Field& other) {
    check_same_grid(*this, other);
    for (int j = 0; j < size(); ++j) values_[j] += other.values_[j];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    check_same_grid(*this, other);
    for (int j = 0; j < size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

Field& Field::operator*=(double a) {
    for (double& v : values_) v *= a;
    return *this;
}

bool Field::all_finite() const {
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

SpectralField::SpectralField(GridPtr grid) : grid_(std::move(grid)), coeff_(grid_->N()) {}

SpectralField::SpectralField(GridPtr grid, std::vector<std::complex<double>> coeff)
    : grid_(std::move(grid)), coeff_(std::move(coeff)) {
    if (static_cast<int>(coeff_.size()) != grid_->N()) {
        throw std::invalid_argument("coefficient length does not match grid");
    }
}

SpectralField forward_transform(const Field& f) {
    const int n = f.size();
    auto& ws = workspace_for(n);
    for (int j = 0; j < n; ++j) {
        ws.in[j][0] = f[j];
        ws.in[j][1] = 0.0;
    }
    fftw_execute_dft(ws.fwd, ws.in, ws.out);
    SpectralField fh(f.grid());
    const double scale = 1.0 / n;
    for (int k = 0; k < n; ++k) {
        const std::complex<double> b(ws.out[k][0], ws.out[k][1]);
        fh[k] = b * std::conj(ws.phase[k]) * scale;
    }
    return fh;
}

Field inverse_transform(const SpectralField& fh) {
    const int n = fh.size();
    auto& ws = workspace_for(n);
    for (int k = 0; k < n; ++k) {
        const std::complex<double> b = fh[k] * ws.phase[k];
        ws.in[k][0] = b.real();
        ws.in[k][1] = b.imag();
    }
    fftw_execute_dft(ws.bwd, ws.in, ws.out);
    Field f(fh.grid());
    for (int j = 0; j < n; ++j) f[j] = ws.out[j][0];
    return f;
}

namespace {

// Apply a real multiplier m (indexed like xi) in spectral space.
Field apply_multiplier(const Field& f, const std::vector<double>& m) {
    const int n = f.size();
    auto& ws = workspace_for(n);
    for (int j = 0; j < n; ++j) {
        ws.in[j][0] = f[j];
        ws.in[j][1] = 0.0;
    }
    fftw_execute_dft(ws.fwd, ws.in, ws.out);
    for (int k = 0; k < n; ++k) {
        ws.in[k][0] = ws.out[k][0] * m[k];
        ws.in[k][1] = ws.out[k][1] * m[k];
    }
    fftw_execute_dft(ws.bwd, ws.in, ws.out);
    Field g(f.grid());
    const double scale = 1.0 / n;
    for (int j = 0; j < n; ++j) g[j] = ws.out[j][0] * scale;
    return g;
}

std::vector<double> abs_xi_multiplier(const Grid& grid) {
    std::vector<double> m(grid.N());
    for (int k = 0; k < grid.N(); ++k) m[k] = std::abs(grid.xi()[k]);
    return m;
}

std::vector<double> minus_xi_sq_multiplier(const Grid& grid) {
    std::vector<double> m(grid.N());
    for (int k = 0; k < grid.N(); ++k) {
        m[k] = (k == grid.N() / 2) ? 0.0 : -grid.xi()[k] * grid.xi()[k];
    }
    return m;
}

}  // namespace

Field half_laplacian(const Field& f) {
    return apply_multiplier(f, abs_xi_multiplier(*f.grid()));
}

Field derivative(const Field& f) {
    // Odd imaginary multiplier: do it explicitly to keep the output real and
    // zero the (unpaired) Nyquist mode.
    const int n = f.size();
    auto& ws = workspace_for(n);
    for (int j = 0; j < n; ++j) {
        ws.in[j][0] = f[j];
        ws.in[j][1] = 0.0;
    }
    fftw_execute_dft(ws.fwd, ws.in, ws.out);
    const auto& xi = f.grid()->xi();
    for (int k = 0; k < n; ++k) {
        const double m = (k == n / 2) ? 0.0 : xi[k];
        const double re = ws.out[k][0];
        const double im = ws.out[k][1];
        ws.in[k][0] = -m * im;
        ws.in[k][1] = m * re;
    }
    fftw_execute_dft(ws.bwd, ws.in, ws.out);
    Field g(f.grid());
    const double scale = 1.0 / n;
    for (int j = 0; j < n; ++j) g[j] = ws.out[j][0] * scale;
    return g;
}

Field second_derivative(const Field& f) {
    return apply_multiplier(f, minus_xi_sq_multiplier(*f.grid()));
}

double h_half_form(const Field& f, const Field& g) {
    check_same_grid(f, g);
    const SpectralField fh = forward_transform(f);
    const SpectralField gh = forward_transform(g);
    const auto& xi = f.grid()->xi();
    double acc = 0.0;
    for (int k = 0; k < f.size(); ++k) {
        acc += (1.0 + std::abs(xi[k])) * (fh[k] * std::conj(gh[k])).real();
    }
    return 2.0 * f.grid()->L() * acc;
}

double inner(const Field& f, const Field& g) {
    check_same_grid(f, g);
    double acc = 0.0;
    for (int j = 0; j < f.size(); ++j) acc += f[j] * g[j];
    return acc * f.grid()->dx();
}

double norm_sq_l2(const Field& f) { return inner(f, f); }

double norm_l2(const Field& f) { return std::sqrt(norm_sq_l2(f)); }

double norm_sq_h1(const Field& f) {
    const SpectralField fh = forward_transform(f);
    const auto& xi = f.grid()->xi();
    double acc = 0.0;
    for (int k = 0; k < f.size(); ++k) {
        acc += (1.0 + xi[k] * xi[k]) * std::norm(fh[k]);
    }
    return 2.0 * f.grid()->L() * acc;
}

double norm_h1(const Field& f) { return std::sqrt(norm_sq_h1(f)); }

double spectral_norm_sq(const SpectralField& fh) {
    double acc = 0.0;
    for (int k = 0; k < fh.size(); ++k) acc += std::norm(fh[k]);
    return 2.0 * fh.grid()->L() * acc;
}

Field spectral_shift(const Field& f, double shift) {
    SpectralField fh = forward_transform(f);
    const int n = f.size();
    const auto& xi = f.grid()->xi();
    for (int k = 0; k < n; ++k) {
        if (k == n / 2) {
            fh[k] *= std::cos(xi[k] * shift);
        } else {
            fh[k] *= std::polar(1.0, xi[k] * shift);
        }
    }
    return inverse_transform(fh);
}

Field pointwise(const Field& f, const Field& g) {
    check_same_grid(f, g);
    Field h(f.grid());
    for (int j = 0; j < f.size(); ++j) h[j] = f[j] * g[j];
    return h;
}

Field odd_part(const Field& f) {
    Field g(f.grid());
    const int n = f.size();
    for (int j = 0; j < n; ++j) {
        g[j] = 0.5 * (f[j] - f[f.grid()->reflect(j)]);
    }
    return g;
}

Field even_part(const Field& f) {
    Field g(f.grid());
    const int n = f.size();
    for (int j = 0; j < n; ++j) {
        g[j] = 0.5 * (f[j] + f[f.grid()->reflect(j)]);
    }
    return g;
}

}  // namespace neel
