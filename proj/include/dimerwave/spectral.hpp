#pragma once

#include "dimerwave/error.hpp"
#include "dimerwave/fft.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace dimerwave {

/**
 * Uniform periodic grid on [-L, L) with n samples, x_j = -L + j*dx.
 *
 * Grids built with lattice() have dx = 1/m for an integer m, so every
 * integer shift is an exact index rotation.
 */
struct Grid {
    double L = 0.0;
    std::size_t n = 0;

    Grid() = default;
    Grid(double half_length, std::size_t n_points);

    /// Grid with spacing exactly 1/per_unit; requires L*per_unit to be an integer.
    static Grid lattice(double half_length, int per_unit);

    double dx() const { return 2.0 * L / static_cast<double>(n); }
    double x(std::size_t j) const { return -L + static_cast<double>(j) * dx(); }
    /// Angular wavenumber of the k-th half-complex coefficient.
    double wavenumber(std::size_t k) const { return std::numbers::pi * static_cast<double>(k) / L; }
    /// Index of -x_j.
    std::size_t mirror(std::size_t j) const { return (n - j) % n; }
    /// Index of x = 0.
    std::size_t center() const { return n / 2; }
    /// Points per unit length when 1/dx is an integer, else 0.
    int per_unit() const;
    bool resolves(double omega) const { return dx() <= std::numbers::pi / (8.0 * omega); }
    Vec coordinates() const;

    template <class F>
    Vec sample(F&& f) const {
        Vec v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = f(x(j));
        return v;
    }

    bool operator==(const Grid& o) const { return n == o.n && L == o.L; }
};

enum class Parity { even, odd, none };

/// Samples of a real function on a Grid together with its symmetry class.
struct GridFunction {
    Grid grid;
    Vec values;
    Parity parity = Parity::none;
    double decay = 0.0;

    GridFunction() = default;
    GridFunction(Grid g, Vec v, Parity p = Parity::none, double b = 0.0);
};

/// Pair (f1 even, f2 odd) on a shared grid.
struct TwoField {
    Grid grid;
    Vec f1;
    Vec f2;

    TwoField() = default;
    TwoField(Grid g, Vec a, Vec b);
    static TwoField zero(const Grid& g) { return TwoField(g, Vec(g.n, 0.0), Vec(g.n, 0.0)); }

    GridFunction first() const { return GridFunction(grid, f1, Parity::even); }
    GridFunction second() const { return GridFunction(grid, f2, Parity::odd); }
};

// Elementwise helpers on raw sample vectors.
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);
Vec hadamard(const Vec& a, const Vec& b);
TwoField operator+(const TwoField& a, const TwoField& b);
TwoField operator-(const TwoField& a, const TwoField& b);
TwoField operator*(double s, const TwoField& a);
double sup_norm(const Vec& a);
double sup_norm(const TwoField& a);
double dot(const Vec& a, const Vec& b);

/// Multiply the transform by m(k); the Nyquist coefficient keeps Re m(k_N) only.
template <class Symbol>
Vec apply_multiplier(const Grid& g, const Vec& f, Symbol&& m) {
    CVec F = rfft(f);
    const std::size_t half = g.n / 2;
    for (std::size_t k = 0; k < half; ++k) F[k] *= std::complex<double>(m(g.wavenumber(k)));
    F[half] *= std::real(std::complex<double>(m(g.wavenumber(half))));
    return irfft(F, g.n);
}

/// Two-component version: (F1, F2) <- M(k) (F1, F2) with a 2x2 complex symbol.
template <class Symbol>
TwoField apply_matrix_multiplier(const TwoField& h, Symbol&& m) {
    const Grid& g = h.grid;
    CVec F1 = rfft(h.f1);
    CVec F2 = rfft(h.f2);
    const std::size_t half = g.n / 2;
    for (std::size_t k = 0; k <= half; ++k) {
        auto M = m(g.wavenumber(k));
        std::complex<double> a = M[0][0] * F1[k] + M[0][1] * F2[k];
        std::complex<double> b = M[1][0] * F1[k] + M[1][1] * F2[k];
        if (k == half) {
            a = std::real(M[0][0]) * F1[k] + std::real(M[0][1]) * F2[k];
            b = std::real(M[1][0]) * F1[k] + std::real(M[1][1]) * F2[k];
        }
        F1[k] = a;
        F2[k] = b;
    }
    return TwoField(g, irfft(F1, g.n), irfft(F2, g.n));
}

Vec derivative(const Grid& g, const Vec& f, int order = 1);

/// Central finite-difference second derivative with 2*half_width + 1 points; periodic wrap.
Vec fd_second_derivative(const Grid& g, const Vec& f, int half_width = 5);

/// Periodic f(x + d); exact index rotation when d is a multiple of dx, transform phases otherwise.
Vec shift_values(const Grid& g, const Vec& f, double d);

/// Periodic trapezoid rule over one period.
double trapz(const Grid& g, const Vec& f);

/// Trapezoid approximation of || cosh^b f ||_{H^s}, derivatives weighted pointwise.
double weighted_norm(const GridFunction& f, int s, double b);

/// Subtract the quadrature mean.
GridFunction mean_zero_project(const GridFunction& f);

/// max |f(x) -/+ f(-x)| scaled by max(1, sup|f|).
double parity_defect(const Grid& g, const Vec& f, Parity p);
Vec symmetrize(const Grid& g, const Vec& f, Parity p);

/// Band-limited resampling onto a grid with the same L and a different n.
Vec resample(const Grid& from, const Vec& f, const Grid& to);

/// Zero extension of a localized profile onto a larger domain with the same spacing.
Vec extend_localized(const Grid& from, const Vec& f, const Grid& to);

/// Running integral F(x) = int_0^x f for localized f, via the transform.
Vec antiderivative_from_zero(const Grid& g, const Vec& f);

/**
 * Local Lagrange interpolation (order points) on a periodic grid.
 * Intended for evaluation at arbitrary points inside ODE right-hand sides.
 */
class LocalInterpolant {
public:
    LocalInterpolant(Grid g, Vec values, int order = 10);
    double operator()(double x) const;

private:
    Grid grid_;
    Vec values_;
    int order_;
    Vec weights_;
};

/// Least-squares line y = a + b x; returns (a, b, R^2).
struct LineFit {
    double intercept;
    double slope;
    double r2;
};
LineFit fit_line(const Vec& x, const Vec& y);

/// Slope of log|y| against log x.
LineFit loglog_fit(const Vec& x, const Vec& y);

}  // namespace dimerwave
