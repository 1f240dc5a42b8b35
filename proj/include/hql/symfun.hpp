#pragma once

#include <Eigen/Dense>

#include "hql/rng.hpp"

namespace hql::symfun {

/// Real eigenvalue vector of length n >= 2, the argument of all the
/// symmetric-function operators below. Entries must be finite.
class Spectrum {
public:
    explicit Spectrum(Eigen::VectorXd values);
    Spectrum(std::initializer_list<double> values);

    int dim() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_(i); }
    const Eigen::VectorXd& values() const { return values_; }

private:
    Eigen::VectorXd values_;
};

/// Elementary symmetric polynomial sigma_k(lambda) = sum of all k-fold
/// products of distinct entries, via the O(nk) prefix recurrence
///   e_k(l_1..l_m) = e_k(l_1..l_{m-1}) + l_m e_{k-1}(l_1..l_{m-1}).
/// Convention sigma_0 = 1. Throws std::domain_error for k outside [0, n].
double sigma_k(const Spectrum& lambda, int k);

/// sigma_{k-1} of lambda with entry i deleted; equals the partial
/// derivative of sigma_k with respect to lambda_i. Requires 1 <= k <= n.
double sigma_k_partial(const Spectrum& lambda, int k, int i);

/// Strict Garding cone test: sigma_l(lambda) > 0 for every l = 1..k.
/// Comparisons are exact; the cone is open and carries no tolerance.
bool in_gamma_k(const Spectrum& lambda, int k);

/// min over l <= k of sigma_l(lambda): a signed distance proxy for callers
/// that need a safety margin on top of the strict cone test.
double gamma_margin(const Spectrum& lambda, int k);

/// (n-1)/(2n) sigma_1^2 - sigma_2, nonnegative for every real lambda.
double newton_maclaurin_gap(const Spectrum& lambda);

/// sigma_2 / sigma_1. Throws std::domain_error when sigma_1 <= 0.
double quotient_21(const Spectrum& lambda);

/// Gradient of quotient_21:
///   d(sigma_2/sigma_1)/dlambda_i = (sigma_1(lambda|i) sigma_1 - sigma_2) / sigma_1^2.
/// Entries are strictly positive on Gamma_2 (ellipticity).
Eigen::VectorXd quotient_21_gradient(const Spectrum& lambda);

/// The eigenvalue shift that turns the quotient operator into a pure
/// sigma_2 operator:
///   mu = lambda - (sigma_2/sigma_1)(lambda)/(n-1) * (1,...,1)
/// For lambda in Gamma_2 the result satisfies
///   sigma_2(mu) = n/(2(n-1)) * (sigma_2/sigma_1)(lambda)^2,
///   sigma_1(mu) >= sigma_1(lambda)/2,  mu in Gamma_2.
/// Throws std::domain_error when lambda is not in Gamma_2.
Spectrum reduction_shift(const Spectrum& lambda);

/// Rejection-sample a Gamma_2 spectrum with entries uniform in [-1, 3].
Spectrum sample_gamma2(Rng& rng, int n);

} // namespace hql::symfun
