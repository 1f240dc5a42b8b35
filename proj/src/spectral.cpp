#include "hql/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hql::spectral {

namespace {

double offdiag_frobenius_sq(const Eigen::MatrixXd& a) {
    double s = 0.0;
    const int n = static_cast<int>(a.rows());
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    }
    return s;
}

} // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() < 2) {
        throw std::domain_error("SymMatrix: need a square matrix of dimension >= 2");
    }
    if (!a.allFinite()) {
        throw std::domain_error("SymMatrix: entries must be finite");
    }
    mat_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(int n) {
    return SymMatrix(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
    return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

EigenDecomposition eigen(const SymMatrix& s) {
    const int n = s.dim();
    Eigen::MatrixXd a = s.matrix();
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);

    const double tol_sq = 1e-28 * a.squaredNorm();  // (1e-14 ||S||_F)^2
    constexpr int kMaxSweeps = 30;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_frobenius_sq(a) <= tol_sq) break;
        for (int p = 0; p < n; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apq = a(p, r);
                if (apq == 0.0) continue;
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                const double tau = sn / (1.0 + c);

                const double app = a(p, p), arr = a(r, r);
                a(p, p) = app - t * apq;
                a(r, r) = arr + t * apq;
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k != p && k != r) {
                        const double akp = a(k, p), akr = a(k, r);
                        a(k, p) = a(p, k) = akp - sn * (akr + tau * akp);
                        a(k, r) = a(r, k) = akr + sn * (akp - tau * akr);
                    }
                    const double qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = qkp - sn * (qkr + tau * qkp);
                    q(k, r) = qkr + sn * (qkp - tau * qkr);
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    Eigen::VectorXd evals(n);
    Eigen::MatrixXd evecs(n, n);
    for (int i = 0; i < n; ++i) {
        evals(i) = a(order[i], order[i]);
        evecs.col(i) = q.col(order[i]);
    }
    return {Spectrum(std::move(evals)), std::move(evecs)};
}

double matrix_operator(const SymMatrix& s, const OperatorDescriptor& op) {
    const int n = s.dim();
    if (op.num < 0 || op.num > n || op.den < 0 || op.den > n) {
        throw std::domain_error("matrix_operator: descriptor index outside [0, n]");
    }
    const Spectrum lambda = eigen(s).eigenvalues;
    if (op.den == 0) {
        return symfun::sigma_k(lambda, op.num);
    }
    const int cone = std::max(op.num, op.den);
    for (int l = 1; l <= cone; ++l) {
        if (!(symfun::sigma_k(lambda, l) > 0.0)) {
            throw std::domain_error("matrix_operator: spectrum outside Gamma_" +
                                    std::to_string(cone) + ", sigma_" + std::to_string(l) +
                                    " <= 0");
        }
    }
    return symfun::sigma_k(lambda, op.num) / symfun::sigma_k(lambda, op.den);
}

bool matrix_admissible(const SymMatrix& s, int k) {
    return symfun::in_gamma_k(eigen(s).eigenvalues, k);
}

double semiconvexity_constant(const SymMatrix& s) {
    const Spectrum lambda = eigen(s).eigenvalues;
    return std::max(0.0, -lambda[0]);
}

std::pair<double, double> duality_pair(const SymMatrix& s) {
    const int n = s.dim();
    const Spectrum lambda = eigen(s).eigenvalues;
    if (!(lambda[0] > 0.0)) {
        throw std::domain_error("duality_pair: matrix not positive definite");
    }
    // Reciprocal eigenvalues, never an explicit matrix inverse.
    const Spectrum inv(lambda.values().cwiseInverse());
    const double lhs = symfun::quotient_21(inv);
    const double rhs = symfun::sigma_k(lambda, n - 2) / symfun::sigma_k(lambda, n - 1);
    return {lhs, rhs};
}

Eigen::MatrixXd random_orthogonal(Rng& rng, int n) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // Box-Muller on two splitmix draws.
            const double u1 = std::max(rng.unit(), 1e-300);
            const double u2 = rng.unit();
            g(i, j) = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        if (r(i, i) < 0.0) q.col(i) = -q.col(i);
    }
    return q;
}

SymMatrix random_spd(Rng& rng, int n, double eig_lo, double eig_hi) {
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = rng.uniform(eig_lo, eig_hi);
    const Eigen::MatrixXd q = random_orthogonal(rng, n);
    return SymMatrix(q * d.asDiagonal() * q.transpose());
}

SymMatrix random_symmetric(Rng& rng, int n, double lo, double hi) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            a(i, j) = rng.uniform(lo, hi);
            a(j, i) = a(i, j);
        }
    }
    return SymMatrix(a);
}

} // namespace hql::spectral
