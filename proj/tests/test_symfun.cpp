#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hql/symfun.hpp"
#include "oracles.hpp"

using hql::Rng;
using namespace hql::symfun;

TEST_CASE("Spectrum validates its input") {
    CHECK_THROWS_AS(Spectrum{Eigen::VectorXd::Ones(1)}, std::domain_error);
    CHECK_THROWS_AS(Spectrum({1.0, std::nan("")}), std::domain_error);
    const Spectrum ok{1.0, 2.0};
    CHECK(ok.dim() == 2);
    CHECK(ok[1] == 2.0);
}

TEST_CASE("sigma_k on pinned inputs") {
    CHECK(sigma_k(Spectrum{1, 1, 1}, 2) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(sigma_k(Spectrum{2, 1, 1}, 2) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(sigma_k(Spectrum{2, 1, 1}, 0) == 1.0);
    CHECK(sigma_k(Spectrum{-4.5, 2.0}, 0) == 1.0);
    CHECK(sigma_k(Spectrum{2, 1, 1}, 3) == doctest::Approx(2.0));
    CHECK_THROWS_AS(sigma_k(Spectrum{1, 1}, 3), std::domain_error);
    CHECK_THROWS_AS(sigma_k(Spectrum{1, 1}, -1), std::domain_error);
}

TEST_CASE("sigma_k matches subset enumeration for n <= 8") {
    Rng rng(101);
    for (int n = 2; n <= 8; ++n) {
        for (int rep = 0; rep < 200; ++rep) {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.uniform(-2.0, 2.0);
            const Spectrum lambda(v);
            for (int k = 0; k <= n; ++k) {
                const double expect = oracles::sigma_k_enumerated(v, k);
                const double got = sigma_k(lambda, k);
                CHECK(std::abs(got - expect) <= 1e-13 * (1.0 + std::abs(expect)));
            }
        }
    }
}

TEST_CASE("sigma_k permutation invariance and homogeneity") {
    Rng rng(202);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform(0.0, 6.0));
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = rng.uniform(-3.0, 3.0);

        Eigen::VectorXd p = v;
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform(0.0, i + 1.0));
            std::swap(p(i), p(j));
        }
        const double t = rng.uniform(0.1, 4.0);
        for (int k = 1; k <= n; ++k) {
            const double base = sigma_k(Spectrum(v), k);
            CHECK(sigma_k(Spectrum(p), k) == doctest::Approx(base).epsilon(1e-12));
            CHECK(sigma_k(Spectrum(t * v), k) ==
                  doctest::Approx(std::pow(t, k) * base).epsilon(1e-12));
        }
    }
}

TEST_CASE("sigma_k_partial equals the deleted-entry sigma and the derivative") {
    CHECK(sigma_k_partial(Spectrum{1, 1, 1}, 2, 0) == doctest::Approx(2.0));
    CHECK(sigma_k_partial(Spectrum{2, 1, 1}, 2, 0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(sigma_k_partial(Spectrum{1, 1}, 1, 2), std::domain_error);
    CHECK_THROWS_AS(sigma_k_partial(Spectrum{1, 1}, 0, 0), std::domain_error);

    Rng rng(303);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform(0.0, 5.0));
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = rng.uniform(-2.0, 2.0);
        const int k = 1 + static_cast<int>(rng.uniform(0.0, static_cast<double>(n)));
        const Eigen::VectorXd fd = oracles::fd_gradient(
            [k](const Eigen::VectorXd& x) { return sigma_k(Spectrum(x), k); }, v);
        for (int i = 0; i < n; ++i) {
            const double got = sigma_k_partial(Spectrum(v), k, i);
            CHECK(std::abs(got - fd(i)) <= 1e-6 * (1.0 + std::abs(got)));
        }
    }
}

TEST_CASE("in_gamma_k strictness and nesting") {
    CHECK(in_gamma_k(Spectrum{1, 1, 1}, 3));
    CHECK(in_gamma_k(Spectrum{1, 1, 0}, 2));
    CHECK_FALSE(in_gamma_k(Spectrum{1, 1, -0.5}, 2));  // sigma_2 == 0 exactly
    CHECK_FALSE(in_gamma_k(Spectrum{1, 1, 0}, 3));     // sigma_3 == 0 exactly
    CHECK_THROWS_AS(in_gamma_k(Spectrum{1, 1}, 0), std::domain_error);
    CHECK_THROWS_AS(in_gamma_k(Spectrum{1, 1}, 3), std::domain_error);

    Rng rng(404);
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform(0.0, 6.0));
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 3.0);
        const Spectrum lambda(v);
        for (int k = n; k >= 2; --k) {
            if (in_gamma_k(lambda, k)) CHECK(in_gamma_k(lambda, k - 1));
        }
    }
}

TEST_CASE("gamma_margin is the minimum sigma over levels") {
    const Spectrum lambda{2, 1, 1};
    CHECK(gamma_margin(lambda, 2) == doctest::Approx(4.0));  // min(sigma_1=4, sigma_2=5)
    CHECK(gamma_margin(Spectrum{1, 1, -0.5}, 2) == doctest::Approx(0.0));
}

TEST_CASE("newton_maclaurin_gap pinned values and nonnegativity sweep") {
    CHECK(newton_maclaurin_gap(Spectrum{1, 1, 1}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(newton_maclaurin_gap(Spectrum{2, 1, 1}) == doctest::Approx(1.0 / 3.0));

    Rng rng(505);
    for (int n = 2; n <= 10; ++n) {
        for (int rep = 0; rep < 10000 / (n + 1); ++rep) {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.uniform(-10.0, 10.0);
            const Spectrum lambda(v);
            const double s1 = sigma_k(lambda, 1);
            CHECK(newton_maclaurin_gap(lambda) >= -1e-12 * (1.0 + s1 * s1));
        }
    }
}

TEST_CASE("quotient_21 values, homogeneity, domain") {
    CHECK(quotient_21(Spectrum{1, 1, 1}) == doctest::Approx(1.0));
    CHECK(quotient_21(Spectrum{2, 1, 1}) == doctest::Approx(1.25));
    CHECK_THROWS_AS(quotient_21(Spectrum{-1, -1, -1}), std::domain_error);

    Rng rng(606);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform(0.0, 5.0));
        const Spectrum lambda = sample_gamma2(rng, n);
        const double t = rng.uniform(0.1, 5.0);
        CHECK(quotient_21(Spectrum(t * lambda.values())) ==
              doctest::Approx(t * quotient_21(lambda)).epsilon(1e-12));
    }
}

TEST_CASE("quotient_21_gradient: pinned value, Euler identity, ellipticity, FD oracle") {
    const Eigen::VectorXd g0 = quotient_21_gradient(Spectrum{1, 1, 1});
    for (int i = 0; i < 3; ++i) CHECK(g0(i) == doctest::Approx(1.0 / 3.0));

    Rng rng(707);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform(0.0, 5.0));
        const Spectrum lambda = sample_gamma2(rng, n);
        const Eigen::VectorXd g = quotient_21_gradient(lambda);

        CHECK(g.minCoeff() > 0.0);  // ellipticity on the cone
        CHECK(lambda.values().dot(g) ==
              doctest::Approx(quotient_21(lambda)).epsilon(1e-12));

        const Eigen::VectorXd fd = oracles::fd_gradient(
            [](const Eigen::VectorXd& x) { return quotient_21(Spectrum(x)); },
            lambda.values());
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(g(i) - fd(i)) <= 1e-6 * (1.0 + std::abs(g(i))));
        }
    }
}

TEST_CASE("reduction_shift pinned examples") {
    const Spectrum mu1 = reduction_shift(Spectrum{1, 1, 1});
    for (int i = 0; i < 3; ++i) CHECK(mu1[i] == doctest::Approx(0.5));
    CHECK(sigma_k(mu1, 2) == doctest::Approx(0.75));

    const Spectrum mu2 = reduction_shift(Spectrum{2, 1, 1});
    CHECK(mu2[0] == doctest::Approx(11.0 / 8.0));
    CHECK(mu2[1] == doctest::Approx(3.0 / 8.0));
    CHECK(mu2[2] == doctest::Approx(3.0 / 8.0));
    CHECK(sigma_k(mu2, 2) == doctest::Approx(75.0 / 64.0));

    for (int n = 2; n <= 9; ++n) {
        const Spectrum mu = reduction_shift(Spectrum(Eigen::VectorXd::Ones(n)));
        for (int i = 0; i < n; ++i) CHECK(mu[i] == doctest::Approx(0.5));
        CHECK(sigma_k(mu, 2) == doctest::Approx(n * (n - 1) / 8.0));
    }

    CHECK_THROWS_AS(reduction_shift(Spectrum{1, 1, -0.5}), std::domain_error);
}

TEST_CASE("reduction_shift identity, lower bound, and cone preservation") {
    Rng rng(808);
    for (int n = 2; n <= 10; ++n) {
        for (int rep = 0; rep < 2000; ++rep) {
            const Spectrum lambda = sample_gamma2(rng, n);
            const double s1 = sigma_k(lambda, 1);
            const double q = quotient_21(lambda);
            const Spectrum mu = reduction_shift(lambda);

            const double target = 0.5 * n / (n - 1) * q * q;
            CHECK(std::abs(sigma_k(mu, 2) - target) <= 1e-12 * (1.0 + s1 * s1));
            CHECK(sigma_k(mu, 1) >= 0.5 * s1 - 1e-12 * s1);
            CHECK(in_gamma_k(mu, 2));
        }
    }
}

TEST_CASE("sample_gamma2 respects the cone and stays in the sampling box") {
    Rng rng(909);
    for (int rep = 0; rep < 1000; ++rep) {
        const Spectrum lambda = sample_gamma2(rng, 4);
        CHECK(in_gamma_k(lambda, 2));
        CHECK(lambda.values().minCoeff() >= -1.0);
        CHECK(lambda.values().maxCoeff() <= 3.0);
    }
}
