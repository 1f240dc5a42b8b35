#include "hql/symfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hql::symfun {

namespace {

// e_0..e_kmax of the full vector by the prefix recurrence, O(n*kmax).
std::vector<double> elementary_prefix(const Eigen::VectorXd& lambda, int kmax) {
    std::vector<double> e(static_cast<std::size_t>(kmax) + 1, 0.0);
    e[0] = 1.0;
    const int n = static_cast<int>(lambda.size());
    for (int m = 0; m < n; ++m) {
        const int top = std::min(kmax, m + 1);
        for (int j = top; j >= 1; --j) {
            e[j] += lambda(m) * e[j - 1];
        }
    }
    return e;
}

void check_k_range(int k, int n, int lo, const char* fn) {
    if (k < lo || k > n) {
        throw std::domain_error(std::string(fn) + ": k = " + std::to_string(k) +
                                " outside [" + std::to_string(lo) + ", " + std::to_string(n) + "]");
    }
}

} // namespace

Spectrum::Spectrum(Eigen::VectorXd values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw std::domain_error("Spectrum: needs at least two eigenvalues");
    }
    if (!values_.allFinite()) {
        throw std::domain_error("Spectrum: entries must be finite");
    }
}

Spectrum::Spectrum(std::initializer_list<double> values)
    : Spectrum(Eigen::Map<const Eigen::VectorXd>(values.begin(),
                                                 static_cast<Eigen::Index>(values.size()))) {}

double sigma_k(const Spectrum& lambda, int k) {
    check_k_range(k, lambda.dim(), 0, "sigma_k");
    if (k == 0) return 1.0;
    return elementary_prefix(lambda.values(), k)[static_cast<std::size_t>(k)];
}

double sigma_k_partial(const Spectrum& lambda, int k, int i) {
    const int n = lambda.dim();
    check_k_range(k, n, 1, "sigma_k_partial");
    if (i < 0 || i >= n) {
        throw std::domain_error("sigma_k_partial: index " + std::to_string(i) + " out of range");
    }
    if (k == 1) return 1.0;
    Eigen::VectorXd reduced(n - 1);
    int w = 0;
    for (int j = 0; j < n; ++j) {
        if (j != i) reduced(w++) = lambda[j];
    }
    return elementary_prefix(reduced, k - 1)[static_cast<std::size_t>(k - 1)];
}

bool in_gamma_k(const Spectrum& lambda, int k) {
    check_k_range(k, lambda.dim(), 1, "in_gamma_k");
    const auto e = elementary_prefix(lambda.values(), k);
    for (int l = 1; l <= k; ++l) {
        if (!(e[static_cast<std::size_t>(l)] > 0.0)) return false;
    }
    return true;
}

double gamma_margin(const Spectrum& lambda, int k) {
    check_k_range(k, lambda.dim(), 1, "gamma_margin");
    const auto e = elementary_prefix(lambda.values(), k);
    double m = e[1];
    for (int l = 2; l <= k; ++l) {
        m = std::min(m, e[static_cast<std::size_t>(l)]);
    }
    return m;
}

double newton_maclaurin_gap(const Spectrum& lambda) {
    const int n = lambda.dim();
    const auto e = elementary_prefix(lambda.values(), 2);
    const double s1 = e[1];
    const double s2 = e[2];
    return (n - 1) / (2.0 * n) * s1 * s1 - s2;
}

double quotient_21(const Spectrum& lambda) {
    const auto e = elementary_prefix(lambda.values(), 2);
    if (!(e[1] > 0.0)) {
        throw std::domain_error("quotient_21: sigma_1 <= 0, operator undefined");
    }
    return e[2] / e[1];
}

Eigen::VectorXd quotient_21_gradient(const Spectrum& lambda) {
    const int n = lambda.dim();
    const auto e = elementary_prefix(lambda.values(), 2);
    const double s1 = e[1];
    const double s2 = e[2];
    if (!(s1 > 0.0)) {
        throw std::domain_error("quotient_21_gradient: sigma_1 <= 0, operator undefined");
    }
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) {
        g(i) = ((s1 - lambda[i]) * s1 - s2) / (s1 * s1);
    }
    return g;
}

Spectrum reduction_shift(const Spectrum& lambda) {
    if (!in_gamma_k(lambda, 2)) {
        throw std::domain_error("reduction_shift: lambda not in Gamma_2");
    }
    const int n = lambda.dim();
    const double shift = quotient_21(lambda) / (n - 1);
    return Spectrum(lambda.values().array() - shift);
}

Spectrum sample_gamma2(Rng& rng, int n) {
    Eigen::VectorXd v(n);
    for (;;) {
        for (int i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 3.0);
        Spectrum s(v);
        if (in_gamma_k(s, 2)) return s;
    }
}

} // namespace hql::symfun
