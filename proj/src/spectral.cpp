#include "dimerwave/spectral.hpp"

#include <algorithm>
#include <numeric>

namespace dimerwave {

Grid::Grid(double half_length, std::size_t n_points) : L(half_length), n(n_points) {
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw InvalidInput("grid half length must be positive and finite");
    if (n_points < 4 || n_points % 2 != 0) throw InvalidInput("grid size must be even and at least 4");
}

Grid Grid::lattice(double half_length, int per_unit) {
    if (per_unit < 1) throw InvalidInput("points per unit length must be positive");
    const double total = 2.0 * half_length * per_unit;
    const double rounded = std::round(total);
    if (std::abs(total - rounded) > 1e-9) throw InvalidInput("2*L*per_unit must be an integer");
    return Grid(half_length, static_cast<std::size_t>(rounded));
}

int Grid::per_unit() const {
    const double m = 1.0 / dx();
    const double r = std::round(m);
    return (r >= 1.0 && std::abs(m - r) < 1e-9 * r) ? static_cast<int>(r) : 0;
}

Vec Grid::coordinates() const {
    Vec v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = x(j);
    return v;
}

GridFunction::GridFunction(Grid g, Vec v, Parity p, double b)
    : grid(g), values(std::move(v)), parity(p), decay(b) {
    if (values.size() != grid.n) throw InvalidInput("sample count does not match grid");
    if (b < 0.0) throw InvalidInput("decay rate must be nonnegative");
}

TwoField::TwoField(Grid g, Vec a, Vec b) : grid(g), f1(std::move(a)), f2(std::move(b)) {
    if (f1.size() != grid.n || f2.size() != grid.n) throw InvalidInput("component size does not match grid");
}

Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec operator*(double s, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

Vec hadamard(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
    return r;
}

TwoField operator+(const TwoField& a, const TwoField& b) { return TwoField(a.grid, a.f1 + b.f1, a.f2 + b.f2); }
TwoField operator-(const TwoField& a, const TwoField& b) { return TwoField(a.grid, a.f1 - b.f1, a.f2 - b.f2); }
TwoField operator*(double s, const TwoField& a) { return TwoField(a.grid, s * a.f1, s * a.f2); }

double sup_norm(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm(const TwoField& a) { return std::max(sup_norm(a.f1), sup_norm(a.f2)); }

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

Vec derivative(const Grid& g, const Vec& f, int order) {
    if (order == 0) return f;
    return apply_multiplier(g, f, [order](double k) { return std::pow(std::complex<double>(0.0, k), order); });
}

Vec fd_second_derivative(const Grid& g, const Vec& f, int half_width) {
    if (half_width < 1 || half_width > 12) throw InvalidInput("stencil half width out of range");
    const int p = half_width;
    // w_k = 2 (-1)^(k+1) (p!)^2 / (k^2 (p-k)! (p+k)!)
    Vec w(p + 1, 0.0);
    for (int k = 1; k <= p; ++k) {
        double ratio = 1.0;  // (p!)^2 / ((p-k)! (p+k)!)
        for (int i = 1; i <= k; ++i) ratio *= static_cast<double>(p - k + i) / static_cast<double>(p + i);
        w[k] = 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * ratio / (k * k);
        w[0] -= 2.0 * w[k];
    }
    const double h2 = g.dx() * g.dx();
    const long n = static_cast<long>(g.n);
    Vec r(g.n);
    for (long j = 0; j < n; ++j) {
        double s = w[0] * f[j];
        for (int k = 1; k <= p; ++k) s += w[k] * (f[((j + k) % n + n) % n] + f[((j - k) % n + n) % n]);
        r[j] = s / h2;
    }
    return r;
}

Vec shift_values(const Grid& g, const Vec& f, double d) {
    const double steps = d / g.dx();
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) < 1e-9) {
        const long n = static_cast<long>(g.n);
        const long s = static_cast<long>(rounded);
        Vec r(g.n);
        for (long j = 0; j < n; ++j) r[j] = f[((j + s) % n + n) % n];
        return r;
    }
    return apply_multiplier(g, f, [d](double k) { return std::polar(1.0, k * d); });
}

double trapz(const Grid& g, const Vec& f) { return g.dx() * std::accumulate(f.begin(), f.end(), 0.0); }

double weighted_norm(const GridFunction& f, int s, double b) {
    if (s < 0) throw InvalidInput("Sobolev index must be nonnegative");
    for (double v : f.values)
        if (!std::isfinite(v)) throw InvalidInput("non-finite sample in weighted norm");
    const Grid& g = f.grid;
    Vec w2 = g.sample([b](double x) { return std::pow(std::cosh(x), 2.0 * b); });
    double total = 0.0;
    for (int order = 0; order <= s; ++order) {
        Vec d = derivative(g, f.values, order);
        for (std::size_t j = 0; j < g.n; ++j) total += w2[j] * d[j] * d[j];
    }
    return std::sqrt(total * g.dx());
}

GridFunction mean_zero_project(const GridFunction& f) {
    const double mean = trapz(f.grid, f.values) / (2.0 * f.grid.L);
    Vec v = f.values;
    for (double& x : v) x -= mean;
    return GridFunction(f.grid, std::move(v), f.parity, f.decay);
}

double parity_defect(const Grid& g, const Vec& f, Parity p) {
    if (p == Parity::none) return 0.0;
    const double sign = p == Parity::even ? 1.0 : -1.0;
    double m = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) m = std::max(m, std::abs(f[j] - sign * f[g.mirror(j)]));
    return m / std::max(1.0, sup_norm(f));
}

Vec symmetrize(const Grid& g, const Vec& f, Parity p) {
    if (p == Parity::none) return f;
    const double sign = p == Parity::even ? 1.0 : -1.0;
    Vec r(g.n);
    for (std::size_t j = 0; j < g.n; ++j) r[j] = 0.5 * (f[j] + sign * f[g.mirror(j)]);
    if (p == Parity::odd) {
        r[g.center()] = 0.0;
        r[0] = 0.0;
    }
    return r;
}

Vec resample(const Grid& from, const Vec& f, const Grid& to) {
    if (std::abs(from.L - to.L) > 1e-12 * from.L) throw InvalidInput("resample requires equal half lengths");
    if (from.n == to.n) return f;
    // Both grids start at -L, so the half-complex coefficients transfer directly.
    CVec F = rfft(f);
    const std::size_t hf = from.n / 2, ht = to.n / 2;
    CVec G(ht + 1, {0.0, 0.0});
    const double scale = static_cast<double>(to.n) / static_cast<double>(from.n);
    for (std::size_t k = 0; k <= std::min(hf, ht); ++k) {
        std::complex<double> c = F[k] * scale;
        if (k == hf && hf < ht) c *= 0.5;  // old Nyquist mode splits between +k and -k
        if (k == ht && ht < hf) c = std::complex<double>(2.0 * c.real(), 0.0);
        G[k] = c;
    }
    return irfft(G, to.n);
}

Vec extend_localized(const Grid& from, const Vec& f, const Grid& to) {
    if (std::abs(from.dx() - to.dx()) > 1e-12 * from.dx() || to.L < from.L)
        throw InvalidInput("extension requires equal spacing and a larger domain");
    Vec r(to.n, 0.0);
    const auto offset = static_cast<std::size_t>(std::llround((to.L - from.L) / to.dx()));
    for (std::size_t j = 0; j < from.n; ++j) r[offset + j] = f[j];
    return r;
}

Vec antiderivative_from_zero(const Grid& g, const Vec& f) {
    const double mean = trapz(g, f) / (2.0 * g.L);
    Vec fl = f;
    for (double& v : fl) v -= mean;
    Vec G = apply_multiplier(g, fl, [](double k) {
        return k == 0.0 ? std::complex<double>(0.0) : std::complex<double>(0.0, -1.0 / k);
    });
    const double g0 = G[g.center()];
    Vec r(g.n);
    for (std::size_t j = 0; j < g.n; ++j) r[j] = G[j] - g0 + mean * g.x(j);
    return r;
}

LocalInterpolant::LocalInterpolant(Grid g, Vec values, int order)
    : grid_(g), values_(std::move(values)), order_(order), weights_(order) {
    if (order < 2 || order > 20) throw InvalidInput("interpolation order out of range");
    // Barycentric weights for equispaced nodes: (-1)^i binom(p-1, i).
    double c = 1.0;
    for (int i = 0; i < order; ++i) {
        weights_[i] = (i % 2 == 0 ? 1.0 : -1.0) * c;
        c = c * (order - 1 - i) / (i + 1);
    }
}

double LocalInterpolant::operator()(double x) const {
    const double dx = grid_.dx();
    const double t = (x + grid_.L) / dx;
    const long base = static_cast<long>(std::floor(t)) - order_ / 2 + 1;
    const long n = static_cast<long>(grid_.n);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < order_; ++i) {
        const double diff = t - static_cast<double>(base + i);
        const double v = values_[((base + i) % n + n) % n];
        if (diff == 0.0) return v;
        const double w = weights_[i] / diff;
        num += w * v;
        den += w;
    }
    return num / den;
}

LineFit fit_line(const Vec& x, const Vec& y) {
    const double n = static_cast<double>(x.size());
    if (x.size() < 2) throw InvalidInput("line fit needs at least two points");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return {my - slope * mx, slope, r2};
}

LineFit loglog_fit(const Vec& x, const Vec& y) {
    Vec lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(std::abs(y[i]));
    }
    return fit_line(lx, ly);
}

}  // namespace dimerwave
