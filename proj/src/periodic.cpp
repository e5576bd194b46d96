#include "dimerwave/periodic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dimerwave {
namespace {

constexpr double pi = std::numbers::pi;

std::size_t grid_points(int K) { return static_cast<std::size_t>(8 * K); }

// cos/sin coefficients k = 1..K of a sample vector on X_j = -pi + 2 pi j / M.
void project_modes(const Vec& f1, const Vec& f2, int K, Vec& a, Vec& b) {
    const double M = static_cast<double>(f1.size());
    CVec F1 = rfft(f1), F2 = rfft(f2);
    a.assign(K + 1, 0.0);
    b.assign(K + 1, 0.0);
    for (int k = 1; k <= K; ++k) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        a[k] = sgn * 2.0 * F1[k].real() / M;
        b[k] = -sgn * 2.0 * F2[k].imag() / M;
    }
}

struct Trig {
    std::vector<Vec> cos_table, sin_table;
    Trig(int K, std::size_t M) : cos_table(K + 1, Vec(M)), sin_table(K + 1, Vec(M)) {
        for (std::size_t j = 0; j < M; ++j) {
            const double X = -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(M);
            for (int k = 1; k <= K; ++k) {
                cos_table[k][j] = std::cos(k * X);
                sin_table[k][j] = std::sin(k * X);
            }
        }
    }
};

// p and p'' on the period grid; the derivative is taken on the coefficients.
std::pair<TwoField, TwoField> sample_on_period(double mu, double omega, const Vec& A, const Vec& B, const Trig& t,
                                               std::size_t M) {
    Grid g(pi / omega, M);
    Vec p1(M, 0.0), p2(M, 0.0), q1(M, 0.0), q2(M, 0.0);
    const int K = static_cast<int>(A.size()) - 1;
    for (int k = 1; k <= K; ++k) {
        const double kk = -(k * omega) * (k * omega);
        for (std::size_t j = 0; j < M; ++j) {
            p1[j] += A[k] * t.cos_table[k][j];
            p2[j] += B[k] * t.sin_table[k][j];
            q1[j] += kk * A[k] * t.cos_table[k][j];
            q2[j] += kk * B[k] * t.sin_table[k][j];
        }
    }
    return {TwoField(g, mu * p1, p2), TwoField(g, mu * q1, q2)};
}

TwoField raw_residual(double mu, double c, double a, const std::pair<TwoField, TwoField>& pq) {
    ModelParams prm{c, mu};
    const TwoField& p = pq.first;
    TwoField r = apply_L(prm, p);
    r.f1 = r.f1 + (c * c) * pq.second.f1;
    r.f2 = r.f2 + (c * c * mu) * pq.second.f2;
    if (a != 0.0) r = r + a * LQ(prm, p, p);
    return r;
}

struct System {
    double mu, c, a, upsilon, z;
    int K;
    std::size_t M;
    Trig trig;

    System(double mu_, double c_, double a_, double ups, double z_, int K_)
        : mu(mu_), c(c_), a(a_), upsilon(ups), z(z_), K(K_), M(grid_points(K_)), trig(K_, grid_points(K_)) {}

    int size() const { return 2 * K + 1; }

    // u = (omega, A_1..A_K, B_1..B_K)
    void unpack(const Eigen::VectorXd& u, double& omega, Vec& A, Vec& B) const {
        omega = u[0];
        A.assign(K + 1, 0.0);
        B.assign(K + 1, 0.0);
        for (int k = 1; k <= K; ++k) {
            A[k] = u[k];
            B[k] = u[K + k];
        }
    }

    Eigen::VectorXd eval(const Eigen::VectorXd& u) const {
        double omega;
        Vec A, B;
        unpack(u, omega, A, B);
        TwoField r = raw_residual(mu, c, a, sample_on_period(mu, omega, A, B, trig, M));
        Vec ra, rb;
        project_modes(r.f1, r.f2, K, ra, rb);
        Eigen::VectorXd F(size());
        for (int k = 1; k <= K; ++k) {
            F[k] = ra[k];
            F[K + k] = rb[k];
        }
        // pi_mu psi = 0 with psi = phi - nu
        F[0] = z * (A[1] - upsilon) + (B[1] - 1.0);
        return F;
    }
};

Vec padded(const Vec& v, int K) {
    Vec out(K + 1, 0.0);
    for (int k = 1; k <= K && k < static_cast<int>(v.size()); ++k) out[k] = v[k];
    return out;
}

}  // namespace

RealMat2 mode_block(double mu, double c, double omega, int k) {
    const Mat2 L = L_symbol(mu, omega * k);
    const std::complex<double> I(0.0, 1.0);
    const double d = c * c * omega * omega * mu * k * k;
    RealMat2 m;
    m[0][0] = mu * L[0][0].real() - d;
    m[0][1] = (-I * L[0][1]).real();
    m[1][0] = (I * mu * L[1][0]).real();
    m[1][1] = L[1][1].real() - d;
    return m;
}

double block_neumann_bound(double mu, double c, double omega, int k) {
    const Mat2 L = L_symbol(mu, omega * k);
    Eigen::Matrix2cd m;
    m << L[0][0] * mu, L[0][1], L[1][0] * mu, L[1][1];
    m /= c * c * omega * omega * mu * k * k;
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
    return svd.singularValues()[0];
}

KernelPair kernel_pair(double mu, double c) {
    const DispersionData d = solve_omega(mu, c);
    KernelPair kp;
    kp.omega = d.omega_mu;
    kp.upsilon = d.upsilon_mu;
    const RealMat2 m = mode_block(mu, c, d.omega_mu, 1);
    // Left null vector (z, 1): z m00 + m10 = 0; use the larger of the two column equations.
    if (std::abs(m[0][0]) >= std::abs(m[0][1]))
        kp.z = -m[1][0] / m[0][0];
    else
        kp.z = -m[1][1] / m[0][1];
    kp.kernel_residual = std::max(std::abs(m[0][0] * kp.upsilon + m[0][1]), std::abs(m[1][0] * kp.upsilon + m[1][1]));
    kp.adjoint_residual = std::max(std::abs(kp.z * m[0][0] + m[1][0]), std::abs(kp.z * m[0][1] + m[1][1]));
    return kp;
}

std::pair<Vec, Vec> solve_gamma(double mu, double c, const Vec& g1, const Vec& g2) {
    const KernelPair kp = kernel_pair(mu, c);
    const int K = static_cast<int>(g1.size()) - 1;
    Vec A(K + 1, 0.0), B(K + 1, 0.0);
    for (int k = 1; k <= K; ++k) {
        const RealMat2 m = mode_block(mu, c, kp.omega, k);
        double r1 = g1[k], r2 = g2[k];
        if (k == 1) {
            // (1 - Pi) g, then solve with zA + B = 0 appended.
            const double pr = (kp.z * r1 + r2) / (kp.z * kp.upsilon + 1.0);
            r1 -= pr * kp.upsilon;
            r2 -= pr;
            Eigen::Matrix<double, 3, 2> S;
            S << m[0][0], m[0][1], m[1][0], m[1][1], kp.z, 1.0;
            Eigen::Vector3d rhs(r1, r2, 0.0);
            Eigen::Vector2d x = S.colPivHouseholderQr().solve(rhs);
            A[k] = x[0];
            B[k] = x[1];
        } else {
            const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            A[k] = (m[1][1] * r1 - m[0][1] * r2) / det;
            B[k] = (m[0][0] * r2 - m[1][0] * r1) / det;
        }
    }
    return {A, B};
}

Vec PeriodicWave::psi1() const {
    Vec v = coeffs1;
    if (v.size() > 1) v[1] -= upsilon;
    return v;
}

Vec PeriodicWave::psi2() const {
    Vec v = coeffs2;
    if (v.size() > 1) v[1] -= 1.0;
    return v;
}

std::array<double, 2> PeriodicWave::p(double x) const {
    const double X = omega_a * x;
    double s1 = 0.0, s2 = 0.0;
    for (int k = 1; k <= n_modes; ++k) {
        s1 += coeffs1[k] * std::cos(k * X);
        s2 += coeffs2[k] * std::sin(k * X);
    }
    return {mu * s1, s2};
}

std::array<double, 2> PeriodicWave::dp(double x) const {
    const double X = omega_a * x;
    double s1 = 0.0, s2 = 0.0;
    for (int k = 1; k <= n_modes; ++k) {
        s1 -= k * coeffs1[k] * std::sin(k * X);
        s2 += k * coeffs2[k] * std::cos(k * X);
    }
    return {mu * omega_a * s1, omega_a * s2};
}

TwoField PeriodicWave::sample(const Grid& g) const {
    Vec p1(g.n), p2(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        auto v = p(g.x(j));
        p1[j] = v[0];
        p2[j] = v[1];
    }
    return TwoField(g, p1, p2);
}

Grid PeriodicWave::period_grid() const { return Grid(pi / omega_a, grid_points(n_modes)); }

TwoField periodic_residual(const PeriodicWave& w, std::size_t n_points) {
    Trig t(w.n_modes, n_points);
    return raw_residual(w.mu, w.c, w.a, sample_on_period(w.mu, w.omega_a, w.coeffs1, w.coeffs2, t, n_points));
}

PeriodicWave solve_periodic(double mu, double c, double a, const PeriodicOptions& opts, const PeriodicWave* guess) {
    ModelParams{c, mu}.validate(true);
    if (!std::isfinite(a)) throw InvalidInput("amplitude must be finite");
    if (opts.n_modes < 16) throw InvalidInput("periodic solver needs at least 16 modes");
    const KernelPair kp = kernel_pair(mu, c);
    int K = opts.n_modes;
    if (guess && guess->n_modes > K) K = guess->n_modes;
    double omega0 = kp.omega;
    Vec A0(K + 1, 0.0), B0(K + 1, 0.0);
    A0[1] = kp.upsilon;
    B0[1] = 1.0;
    if (guess) {
        omega0 = guess->omega_a;
        A0 = padded(guess->coeffs1, K);
        B0 = padded(guess->coeffs2, K);
    }
    for (;;) {
        System sys(mu, c, a, kp.upsilon, kp.z, K);
        Eigen::VectorXd u(sys.size());
        u[0] = omega0;
        for (int k = 1; k <= K; ++k) {
            u[k] = A0[k];
            u[K + k] = B0[k];
        }
        Eigen::VectorXd F = sys.eval(u);
        int steps = 0;
        double res = F.lpNorm<Eigen::Infinity>();
        while (res > opts.tol) {
            if (steps >= opts.max_newton || !std::isfinite(res))
                throw SolverError("periodic Newton iteration failed at a = " + std::to_string(a), res);
            Eigen::MatrixXd J(sys.size(), sys.size());
            for (int i = 0; i < sys.size(); ++i) {
                const double h = 1e-6 * std::max(1.0, std::abs(u[i])) * (i == 0 ? 1.0 : 0.1);
                Eigen::VectorXd up = u, um = u;
                up[i] += h;
                um[i] -= h;
                J.col(i) = (sys.eval(up) - sys.eval(um)) / (2.0 * h);
            }
            Eigen::VectorXd du = J.partialPivLu().solve(-F);
            u += du;
            ++steps;
            F = sys.eval(u);
            const double next = F.lpNorm<Eigen::Infinity>();
            // Roundoff floor: the update no longer moves the iterate.
            if (du.lpNorm<Eigen::Infinity>() < 1e-15 * u.lpNorm<Eigen::Infinity>() && next < 1e-11) {
                res = next;
                break;
            }
            res = next;
        }
        PeriodicWave w;
        w.mu = mu;
        w.c = c;
        w.a = a;
        w.omega_mu = kp.omega;
        w.upsilon = kp.upsilon;
        w.z = kp.z;
        w.n_modes = K;
        w.newton_steps = steps;
        sys.unpack(u, w.omega_a, w.coeffs1, w.coeffs2);
        w.tail = std::max(std::abs(w.coeffs1[K]), std::abs(w.coeffs2[K])) / std::abs(w.coeffs2[1]);
        const TwoField r = periodic_residual(w, grid_points(K));
        w.residual_normalized = sup_norm(r);
        w.residual = a == 0.0 ? 0.0 : std::abs(a) * w.residual_normalized;
        if (w.tail > opts.tail_ratio || w.residual > opts.max_residual) {
            if (!opts.auto_modes || 2 * K > opts.max_modes)
                throw ResolutionError("periodic wave is not resolved by " + std::to_string(K) + " modes (tail " +
                                      std::to_string(w.tail) + ", residual " + std::to_string(w.residual) + ")");
            K *= 2;
            omega0 = w.omega_a;
            A0 = padded(w.coeffs1, K);
            B0 = padded(w.coeffs2, K);
            continue;
        }
        return w;
    }
}

AmaxResult find_a_max(double mu, double c, double da, double a_cap, int max_steps, const PeriodicOptions& opts) {
    if (!(da > 0.0) || !(a_cap > da)) throw InvalidInput("continuation needs 0 < da < a_cap");
    AmaxResult out;
    out.branch.push_back(solve_periodic(mu, c, 0.0, opts));
    for (int i = 1;; ++i) {
        const double a = i * da;
        if (a > a_cap + 1e-12) {
            out.stop_reason = "reached amplitude cap";
            break;
        }
        try {
            PeriodicWave w = solve_periodic(mu, c, a, opts, &out.branch.back());
            if (w.newton_steps > max_steps) {
                out.stop_reason = "Newton needed " + std::to_string(w.newton_steps) + " steps at a = " + std::to_string(a);
                break;
            }
            out.branch.push_back(std::move(w));
        } catch (const Error& e) {
            out.stop_reason = e.what();
            break;
        }
    }
    out.a_max = out.branch.back().a;
    return out;
}

}  // namespace dimerwave
