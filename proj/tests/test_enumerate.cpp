#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "nevdiff/enumerate.hpp"
#include "nevdiff/errors.hpp"
#include "oracles.hpp"

using namespace nevdiff;

namespace {

// independent count of the zeros of g inside |z| = r by a dense circular
// argument-principle walk (no poles of g on or inside the circle allowed
// unless accounted by the caller)
int circle_winding(const std::function<Complex(Complex)>& g, double r, int n = 200000) {
    double total = 0.0;
    Complex prev = g(r * Complex(1, 0));
    for (int j = 1; j <= n; ++j) {
        double th = 2 * M_PI * j / n;
        Complex v = g(r * Complex(std::cos(th), std::sin(th)));
        total += std::arg(v / prev);
        prev = v;
    }
    return int(std::lround(total / (2 * M_PI)));
}

}  // namespace

TEST_CASE("sn pole and zero lattices are reproduced exactly") {
    auto sn = mf_jacobi_sn(0.5);
    double K = elliptic_K(0.5);
    double Kp = elliptic_K(std::sqrt(0.75));
    Session ses;

    for (double r : {6.0, 14.0, 25.0}) {
        auto poles = enumerate_points(ses, sn, TargetKey::inf(), r);
        std::set<std::pair<long, long>> seen;
        for (auto& p : poles) {
            CHECK(p.multiplicity == 1);
            // location must be 2nK + (2m+1) i K' on the nose
            double n = p.location.real() / (2 * K);
            double m = (p.location.imag() / Kp - 1.0) / 2.0;
            CHECK(std::abs(n - std::round(n)) < 1e-9);
            CHECK(std::abs(m - std::round(m)) < 1e-9);
            seen.insert({std::lround(n), std::lround(m)});
        }
        // every lattice point inside the disc is present
        long Nn = long(r / (2 * K)) + 2, Nm = long(r / (2 * Kp)) + 2;
        size_t expect = 0;
        for (long n = -Nn; n <= Nn; ++n)
            for (long m = -Nm; m <= Nm; ++m)
                if (std::abs(Complex(2 * n * K, (2 * m + 1) * Kp)) <= r + 1e-9 * (1 + r))
                    ++expect;
        CHECK(seen.size() == poles.size());
        CHECK(poles.size() == expect);
    }
}

TEST_CASE("duality: poles of f equal zeros of 1/f") {
    Session ses;
    auto sn = mf_jacobi_sn(0.5);
    auto rec = mf_reciprocal(sn);
    auto a = enumerate_points(ses, sn, TargetKey::inf(), 12.0);
    auto b = enumerate_points(ses, rec, TargetKey::at({0, 0}), 12.0);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i].location - b[i].location) < 1e-12);
        CHECK(a[i].multiplicity == b[i].multiplicity);
    }
}

TEST_CASE("entire functions have no zeros or poles") {
    Session ses;
    auto e = mf_exp();
    for (double r : {3.0, 20.0, 50.0}) {
        CHECK(enumerate_points(ses, e, TargetKey::at({0, 0}), r).empty());
        CHECK(enumerate_points(ses, e, TargetKey::inf(), r).empty());
    }
}

TEST_CASE("rational function: explicit roots") {
    Session ses;
    auto f = mf_rational({{-1, 0}, {1, 0}}, {{1, 0}, {1, 0}});  // (z-1)/(z+1)
    auto zs = enumerate_points(ses, f, TargetKey::at({0, 0}), 2.0);
    REQUIRE(zs.size() == 1);
    CHECK(std::abs(zs[0].location - Complex(1, 0)) < 1e-9);
    CHECK(zs[0].multiplicity == 1);
    auto ps = enumerate_points(ses, f, TargetKey::inf(), 2.0);
    REQUIRE(ps.size() == 1);
    CHECK(std::abs(ps[0].location - Complex(-1, 0)) < 1e-9);
}

TEST_CASE("exp_linear a-points in closed form") {
    Session ses;
    auto e = mf_exp();
    auto pts = enumerate_points(ses, e, TargetKey::at({2, 0}), 15.0);
    CHECK(!pts.empty());
    for (auto& p : pts) {
        CHECK(std::abs(std::exp(p.location) - Complex(2, 0)) < 1e-10);
        CHECK(p.multiplicity == 1);
    }
    // count: log 2 + 2 pi i k within radius 15
    size_t expect = 0;
    for (long k = -10; k <= 10; ++k)
        if (std::abs(Complex(std::log(2.0), 2 * M_PI * k)) <= 15.0) ++expect;
    CHECK(pts.size() == expect);
}

TEST_CASE("winding fallback: a-points of weierstrass p") {
    Session ses;
    auto wp = mf_weierstrass();
    const Complex a(0.7, 0.0);
    double r = 4.2;  // no lattice point on the circle
    auto pts = enumerate_points(ses, wp, TargetKey::at(a), r);
    CHECK(!pts.empty());
    WeierstrassP P({1, 0}, {0, 1.15});
    for (auto& p : pts) {
        CHECK(std::abs(P(p.location) - a) < 1e-6);
        CHECK(p.multiplicity == 1);
    }
    // independent count: argument principle on the circle, corrected by the
    // enclosed double poles
    int n_poles = 0;
    for (auto& q : enumerate_points(ses, wp, TargetKey::inf(), r)) {
        (void)q;
        ++n_poles;
    }
    int W = circle_winding([&](Complex z) { return P(z) - a; }, r);
    int mult_sum = 0;
    for (auto& p : pts) mult_sum += p.multiplicity;
    CHECK(mult_sum == W + 2 * n_poles);
}

TEST_CASE("winding fallback: composite difference of a rational") {
    Session ses;
    // f = (z-1)/(z+1), c = 1; Delta f = 2/((z+1)(z+2)) worked out by hand
    auto f = mf_rational({{-1, 0}, {1, 0}}, {{1, 0}, {1, 0}});
    SpecPtr d = difference_spec(f.spec(), {1, 0});
    REQUIRE(d != nullptr);
    auto dm = mf_from_spec(d);

    auto ps = enumerate_points(ses, dm, TargetKey::inf(), 5.0);
    REQUIRE(ps.size() == 2);
    CHECK(std::abs(ps[0].location - Complex(-2, 0)) < 1e-7);
    CHECK(std::abs(ps[1].location - Complex(-1, 0)) < 1e-7);
    CHECK(ps[0].multiplicity == 1);
    CHECK(ps[1].multiplicity == 1);

    auto zs = enumerate_points(ses, dm, TargetKey::at({0, 0}), 5.0);
    CHECK(zs.empty());
}

TEST_CASE("exp_exp one-points") {
    Session ses;
    auto f = mf_exp_exp();
    auto pts = enumerate_points(ses, f, TargetKey::at({1, 0}), 4.0);
    CHECK(!pts.empty());
    for (auto& p : pts) {
        Complex v = std::exp(std::exp(p.location));
        CHECK(std::abs(v - Complex(1, 0)) < 1e-8);
    }
    // Picard exceptional values
    CHECK(enumerate_points(ses, f, TargetKey::at({0, 0}), 4.0).empty());
    CHECK(enumerate_points(ses, f, TargetKey::inf(), 4.0).empty());
    CHECK_THROWS_AS(enumerate_points(ses, f, TargetKey::at({1, 0}), 13.0), EnumerationError);
}

TEST_CASE("sn a-points for a generic target via winding") {
    Session ses;
    auto sn = mf_jacobi_sn(0.5);
    const Complex a(2.5, 0.0);
    auto pts = enumerate_points(ses, sn, TargetKey::at(a), 7.0);
    CHECK(!pts.empty());
    for (auto& p : pts) {
        CHECK(std::abs(jacobi_sn(p.location, 0.5) - a) < 1e-6);
        CHECK(p.multiplicity == 1);
    }
}
