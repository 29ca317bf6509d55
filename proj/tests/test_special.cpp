#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nevdiff/errors.hpp"
#include "nevdiff/special.hpp"
#include "oracles.hpp"

using namespace nevdiff;

TEST_CASE("elliptic_K basic values") {
    CHECK(elliptic_K(0.0) == doctest::Approx(M_PI / 2).epsilon(1e-14));
    // AGM against quadrature of the defining integral
    for (double k : {0.3, 0.5, 0.7, 0.9, 0.99}) {
        double ref = oracle::elliptic_K_quadrature(k);
        CHECK(std::abs(elliptic_K(k) - ref) <= 1e-9 * ref);
    }
    CHECK(elliptic_K(0.99) > elliptic_K(0.5));
    CHECK(std::isfinite(elliptic_K(0.99)));
    CHECK_THROWS_AS(elliptic_K(1.0), DomainError);
    CHECK_THROWS_AS(elliptic_K(-0.1), DomainError);
}

TEST_CASE("jacobi_sncndn special points and identities") {
    double k = 0.5;
    double K = elliptic_K(k);
    auto j0 = jacobi_sncndn(0.0, k);
    CHECK(std::abs(j0.sn) < 1e-14);
    CHECK(j0.cn == doctest::Approx(1.0));
    CHECK(j0.dn == doctest::Approx(1.0));
    auto jK = jacobi_sncndn(K, k);
    CHECK(jK.sn == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(jK.cn) < 1e-10);
    CHECK(jK.dn == doctest::Approx(std::sqrt(1 - k * k)).epsilon(1e-12));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-20.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        double u = U(rng);
        auto j = jacobi_sncndn(u, k);
        CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) < 1e-12);
        CHECK(std::abs(j.dn * j.dn + k * k * j.sn * j.sn - 1.0) < 1e-12);
        auto js = jacobi_sncndn(u + 2 * K, k);
        CHECK(std::abs(js.sn + j.sn) < 1e-10);
    }
}

TEST_CASE("complex sn: zeros, poles, periodicity") {
    double k = 0.5;
    double K = elliptic_K(k);
    double Kp = elliptic_K(std::sqrt(1 - k * k));

    CHECK(std::abs(jacobi_sn(Complex(0, 0), k)) < 1e-13);
    CHECK(std::abs(jacobi_sn(Complex(2 * K, 2 * Kp), k)) < 1e-10);
    // pole at iK': approach and watch the blow-up
    CHECK(std::abs(jacobi_sn(Complex(1e-4, Kp), k)) > 1e3);
    // sn(z + iK') = 1/(k sn z)
    Complex z(0.37, 0.21);
    Complex lhs = jacobi_sn(z + Complex(0, Kp), k);
    Complex rhs = 1.0 / (k * jacobi_sn(z, k));
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-8.0, 8.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        Complex z(U(rng), U(rng));
        Complex s = jacobi_sn(z, k);
        if (!std::isfinite(std::abs(s)) || std::abs(s) > 1e8) continue;
        Complex s4 = jacobi_sn(z + 4 * K, k);
        Complex s2 = jacobi_sn(z + 2 * K, k);
        Complex sp = jacobi_sn(z + Complex(0, 2 * Kp), k);
        CHECK(std::abs(s4 - s) <= 1e-9 * (1 + std::abs(s)));
        CHECK(std::abs(s2 + s) <= 1e-9 * (1 + std::abs(s)));
        CHECK(std::abs(sp - s) <= 1e-9 * (1 + std::abs(s)));
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("weierstrass p against lattice-sum oracle") {
    Complex w1(1.0, 0.0), w2(0.0, 1.15);
    WeierstrassP wp(w1, w2);

    // direct Eisenstein sum is slowly convergent; compare loosely
    for (Complex z : {Complex(0.31, 0.17), Complex(-0.42, 0.55), Complex(0.9, -0.8),
                      Complex(0.05, 0.95)}) {
        Complex ref = oracle::wp_lattice_sum(z, w1, w2, 120);
        Complex got = wp(z);
        CHECK(std::abs(got - ref) <= 2e-3 * (1.0 + std::abs(ref)));
    }

    // Laurent structure near 0: p(z) ~ 1/z^2 + g2/20 z^2 + g3/28 z^4
    Complex g2, g3;
    oracle::wp_invariants(w1, w2, g2, g3, 250);
    for (Complex z : {Complex(0.05, 0.03), Complex(-0.04, 0.06)}) {
        Complex ref = 1.0 / (z * z) + g2 / 20.0 * z * z + g3 / 28.0 * z * z * z * z;
        Complex got = wp(z);
        CHECK(std::abs(got - ref) <= 1e-5 * std::abs(ref));
    }
}

TEST_CASE("weierstrass p periodicity and pole blow-up") {
    Complex w1(1.0, 0.0), w2(0.0, 1.15);
    WeierstrassP wp(w1, w2);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-6.0, 6.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        Complex z(U(rng), U(rng));
        if (wp.lattice().near_point(z, 0.05)) continue;
        Complex v = wp(z);
        CHECK(std::abs(wp(z + 2.0 * w1) - v) <= 1e-9 * (1 + std::abs(v)));
        CHECK(std::abs(wp(z + 2.0 * w2) - v) <= 1e-9 * (1 + std::abs(v)));
        // evenness
        CHECK(std::abs(wp(-z) - v) <= 1e-9 * (1 + std::abs(v)));
        ++checked;
    }
    CHECK(checked > 900);
    CHECK(std::abs(wp(Complex(1e-5, 0))) > 1e9);
    CHECK(std::abs(wp(2.0 * w1 + Complex(1e-5, 0))) > 1e9);
}
