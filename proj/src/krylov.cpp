#include "dimerwave/krylov.hpp"

#include "dimerwave/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace dimerwave {

GmresResult gmres(const LinearMap& A, const Vec& b, const LinearMap& M, const GmresOptions& opts, const Vec& x0) {
    const std::size_t n = b.size();
    GmresResult out;
    out.x = x0.empty() ? Vec(n, 0.0) : x0;
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) {
        out.x.assign(n, 0.0);
        out.converged = true;
        return out;
    }
    int total = 0;
    while (total < opts.max_iter) {
        Vec r = b - A(out.x);
        double beta = std::sqrt(dot(r, r));
        out.rel_residual = beta / bnorm;
        if (out.rel_residual <= opts.rel_tol) {
            out.converged = true;
            break;
        }
        const int m = opts.restart;
        std::vector<Vec> V;
        std::vector<Vec> Z;
        V.push_back((1.0 / beta) * r);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
        Eigen::VectorXd cs = Eigen::VectorXd::Zero(m), sn = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
        g(0) = beta;
        int k = 0;
        for (; k < m && total < opts.max_iter; ++k, ++total) {
            Z.push_back(M(V[k]));
            Vec w = A(Z[k]);
            // Modified Gram-Schmidt, repeated once for stability.
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= k; ++i) {
                    const double h = dot(w, V[i]);
                    H(i, k) += h;
                    for (std::size_t j = 0; j < n; ++j) w[j] -= h * V[i][j];
                }
            }
            H(k + 1, k) = std::sqrt(dot(w, w));
            for (int i = 0; i < k; ++i) {
                const double t = cs(i) * H(i, k) + sn(i) * H(i + 1, k);
                H(i + 1, k) = -sn(i) * H(i, k) + cs(i) * H(i + 1, k);
                H(i, k) = t;
            }
            const double denom = std::hypot(H(k, k), H(k + 1, k));
            cs(k) = denom == 0.0 ? 1.0 : H(k, k) / denom;
            sn(k) = denom == 0.0 ? 0.0 : H(k + 1, k) / denom;
            const double hk1 = H(k + 1, k);
            H(k, k) = cs(k) * H(k, k) + sn(k) * hk1;
            H(k + 1, k) = 0.0;
            g(k + 1) = -sn(k) * g(k);
            g(k) = cs(k) * g(k);
            const double res = std::abs(g(k + 1)) / bnorm;
            if (res <= opts.rel_tol || hk1 == 0.0) {
                ++k;
                ++total;
                break;
            }
            V.push_back((1.0 / hk1) * w);
        }
        Eigen::VectorXd y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
        for (int i = 0; i < k; ++i)
            for (std::size_t j = 0; j < n; ++j) out.x[j] += y(i) * Z[i][j];
    }
    Vec r = b - A(out.x);
    out.rel_residual = std::sqrt(dot(r, r)) / bnorm;
    out.converged = out.rel_residual <= opts.rel_tol * 10.0;
    out.iterations = total;
    return out;
}

}  // namespace dimerwave
