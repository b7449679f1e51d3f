#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace neel {

// Uniform periodic grid on [-L, L) with N (even) cell-centered nodes
// x_j = -L + (j + 1/2) dx, dx = 2L/N. Wavenumbers are the standard discrete
// set xi_k = pi*k/L stored in FFT order: k = 0, 1, ..., N/2-1, -N/2, ...,
// -1; the array is rebuilt deterministically from (L, N), so it is
// reproducible bit-exactly. Cell centering keeps the reflection x -> -x
// free of fixed nodes: neither x = 0 nor the periodic seam x = +-L (the
// image of infinity, where the wall phase winds by pi) is sampled, which
// makes odd/even parity and the half-period orbit symmetry exact at the
// discrete level.
class Grid {
public:
    Grid(double half_width, int n_points);

    double L() const { return L_; }
    int N() const { return N_; }
    double dx() const { return dx_; }
    double x(int j) const { return -L_ + (j + 0.5) * dx_; }
    const std::vector<double>& xi() const { return xi_; }
    double xi_max() const;  // pi/dx, attained (in modulus) at the Nyquist mode

    // Index of the node at -x_j; a fixed-point-free involution.
    int reflect(int j) const { return N_ - 1 - j; }

    bool operator==(const Grid& other) const { return L_ == other.L_ && N_ == other.N_; }
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    double L_;
    int N_;
    double dx_;
    std::vector<double> xi_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double half_width, int n_points);

// Real-valued samples of a function of x on a Grid. Arithmetic between two
// Fields requires identical grids (same L and N).
class Field {
public:
    Field() = default;
    explicit Field(GridPtr grid);  // zero-initialized
    Field(GridPtr grid, std::vector<double> values);

    const GridPtr& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }

    double operator[](int j) const { return values_[j]; }
    double& operator[](int j) { return values_[j]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double a);
    friend Field operator+(Field a, const Field& b) { a += b; return a; }
    friend Field operator-(Field a, const Field& b) { a -= b; return a; }
    friend Field operator*(double a, Field f) { f *= a; return f; }

    bool all_finite() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

// Discrete Fourier coefficients of a Field, stored as mode amplitudes:
// f(x_j) = sum_k c_k exp(i xi_k x_j), so c_0 is the mean of f. With this
// normalization Parseval reads ||f||_{L2}^2 = 2L sum_k |c_k|^2, which is
// what spectral_norm_sq() returns; the weight 2L is the spectral measure
// matching the trapezoid rule in x. The convention is locked by tests.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(GridPtr grid);
    SpectralField(GridPtr grid, std::vector<std::complex<double>> coeff);

    const GridPtr& grid() const { return grid_; }
    int size() const { return static_cast<int>(coeff_.size()); }
    std::complex<double> operator[](int k) const { return coeff_[k]; }
    std::complex<double>& operator[](int k) { return coeff_[k]; }
    const std::vector<std::complex<double>>& coeff() const { return coeff_; }
    std::vector<std::complex<double>>& coeff() { return coeff_; }

private:
    GridPtr grid_;
    std::vector<std::complex<double>> coeff_;
};

SpectralField forward_transform(const Field& f);
Field inverse_transform(const SpectralField& fh);

// Fourier multiplier |xi| (the half-Laplacian). Annihilates constants.
Field half_laplacian(const Field& f);

// Spectral derivatives. The Nyquist mode is zeroed in both so that
// second_derivative equals derivative of derivative on any input.
Field derivative(const Field& f);
Field second_derivative(const Field& f);

// b[f,g] = 2L sum_k (1 + |xi_k|) c_k(f) conj(c_k(g)); symmetric for real
// fields and >= ||f||_{L2}^2 when f = g.
double h_half_form(const Field& f, const Field& g);

// Discrete L2 inner product dx * sum_j f_j g_j and derived norms.
double inner(const Field& f, const Field& g);
double norm_sq_l2(const Field& f);
double norm_l2(const Field& f);
double norm_sq_h1(const Field& f);  // ||f||^2 + ||f'||^2
double norm_h1(const Field& f);
double spectral_norm_sq(const SpectralField& fh);

// f evaluated at x + shift through the band-limited interpolant (the
// Nyquist mode is shifted with its symmetrized real weight).
Field spectral_shift(const Field& f, double shift);

// Pointwise product sampled on the grid.
Field pointwise(const Field& f, const Field& g);

// Odd part (f(x) - f(-x))/2 under the grid reflection.
Field odd_part(const Field& f);
Field even_part(const Field& f);

}  // namespace neel
