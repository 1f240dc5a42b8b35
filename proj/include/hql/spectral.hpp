#pragma once

#include <utility>

#include <Eigen/Dense>

#include "hql/rng.hpp"
#include "hql/symfun.hpp"

namespace hql::spectral {

using symfun::Spectrum;

/// Dense real symmetric n x n matrix (n >= 2). Symmetrized on ingest, so
/// S(i,j) == S(j,i) holds exactly afterwards.
class SymMatrix {
public:
    explicit SymMatrix(const Eigen::MatrixXd& a);

    static SymMatrix identity(int n);
    static SymMatrix diagonal(const Eigen::VectorXd& d);

    int dim() const { return static_cast<int>(mat_.rows()); }
    double operator()(int i, int j) const { return mat_(i, j); }
    const Eigen::MatrixXd& matrix() const { return mat_; }

private:
    Eigen::MatrixXd mat_;
};

/// Result of eigen(): eigenvalues ascending, eigenvectors as the columns of
/// an orthogonal matrix Q with S = Q diag(eigenvalues) Q^T.
struct EigenDecomposition {
    Spectrum eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

/// Cyclic Jacobi diagonalization. Sweeps rotate every off-diagonal pair
/// until the off-diagonal Frobenius mass drops below 1e-14 * ||S||_F,
/// capped at 30 sweeps.
EigenDecomposition eigen(const SymMatrix& s);

/// Descriptor for the scalar operators acting on spectra: sigma_num when
/// den == 0, otherwise the quotient sigma_num / sigma_den. Quotients are
/// restricted to the Garding cone Gamma_max(num, den).
struct OperatorDescriptor {
    int num = 1;
    int den = 0;

    static OperatorDescriptor sigma(int k) { return {k, 0}; }
    static OperatorDescriptor quotient(int num, int den) { return {num, den}; }
    /// sigma_2 / sigma_1, the central operator of this library.
    static OperatorDescriptor quotient21() { return {2, 1}; }
    /// sigma_{n-1} / sigma_{n-2}, the Legendre-dual quotient.
    static OperatorDescriptor dual_quotient(int n) { return {n - 1, n - 2}; }
};

/// Evaluate the descriptor at the eigenvalues of S. For quotients, throws
/// std::domain_error naming the first sigma_l that fails to be positive.
double matrix_operator(const SymMatrix& s, const OperatorDescriptor& op);

/// lambda(S) in Gamma_k.
bool matrix_admissible(const SymMatrix& s, int k);

/// max(0, -lambda_min(S)): the smallest K >= 0 with S >= -K I.
double semiconvexity_constant(const SymMatrix& s);

/// For positive definite S, returns
///   ( sigma_2/sigma_1 at the reciprocal eigenvalues of S,
///     sigma_{n-2}(lambda(S)) / sigma_{n-1}(lambda(S)) ).
/// The two components agree up to rounding; their agreement is the
/// computational content of the inverse-matrix duality.
std::pair<double, double> duality_pair(const SymMatrix& s);

/// Haar-like random orthogonal matrix: QR of a Gaussian sample with the
/// signs of Q fixed so that R has a positive diagonal.
Eigen::MatrixXd random_orthogonal(Rng& rng, int n);

/// Random symmetric positive definite matrix with eigenvalues uniform in
/// [eig_lo, eig_hi] and a Haar-like eigenbasis.
SymMatrix random_spd(Rng& rng, int n, double eig_lo, double eig_hi);

/// Random symmetric matrix with entries uniform in [lo, hi].
SymMatrix random_symmetric(Rng& rng, int n, double lo, double hi);

} // namespace hql::spectral
