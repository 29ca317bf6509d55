#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nevdiff/errors.hpp"
#include "nevdiff/nevanlinna.hpp"
#include "oracles.hpp"

using namespace nevdiff;

TEST_CASE("proximity of exp against the closed-form r/pi") {
    Session ses;
    auto e = mf_exp();
    for (double r : {5.0, 12.0, 27.0, 50.0}) {
        double m = proximity(ses, e, TargetKey::inf(), r);
        CHECK(std::abs(m - r / M_PI) <= 0.01 * (r / M_PI));
    }
}

TEST_CASE("proximity is nonnegative and small for bounded rationals") {
    Session ses;
    auto f = mf_rational({{-1, 0}, {1, 0}}, {{1, 0}, {1, 0}});
    double m = proximity(ses, f, TargetKey::inf(), 100.0);
    CHECK(m >= 0.0);
    CHECK(m <= 0.05);
    auto sn = mf_jacobi_sn(0.5);
    CHECK(proximity(ses, sn, TargetKey::at({0.3, 0.2}), 7.7) >= 0.0);
}

TEST_CASE("counting: explicit log sums") {
    Session ses;
    auto f = mf_rational({{-1, 0}, {1, 0}}, {{1, 0}, {1, 0}});
    for (double r : {1.5, 4.0, 20.0}) {
        CHECK(counting(ses, f, TargetKey::at({0, 0}), r, false) ==
              doctest::Approx(std::log(r)).epsilon(1e-12));
    }
    auto e = mf_exp();
    CHECK(counting(ses, e, TargetKey::at({0, 0}), 30.0, false) == 0.0);

    // simple poles: multiplicity-counting and reduced counting coincide
    auto sn = mf_jacobi_sn(0.5);
    for (double r : {5.0, 17.0}) {
        double a = counting(ses, sn, TargetKey::inf(), r, false);
        double b = counting(ses, sn, TargetKey::inf(), r, true);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
        CHECK(b <= a + 1e-12);
    }
}

TEST_CASE("characteristic of exp and monotonicity") {
    Session ses;
    auto e = mf_exp();
    double prev = 0.0;
    for (double r : {5.0, 9.0, 16.0, 28.0, 50.0}) {
        double T = characteristic(ses, e, r);
        CHECK(std::abs(T - r / M_PI) <= 0.01 * (r / M_PI));
        CHECK(T >= prev - 1e-6);
        prev = T;
    }
}

TEST_CASE("characteristic of a rational grows like d log r") {
    Session ses;
    // degree 2 rational: (z^2 + 1) / (z - 3)
    auto f = mf_rational({{1, 0}, {0, 0}, {1, 0}}, {{-3, 0}, {1, 0}});
    std::vector<double> d;
    for (double r : {10.0, 20.0, 40.0, 80.0})
        d.push_back(characteristic(ses, f, r) - 2.0 * std::log(r));
    double lo = *std::min_element(d.begin(), d.end());
    double hi = *std::max_element(d.begin(), d.end());
    CHECK(hi - lo <= 0.5);
}

TEST_CASE("first main theorem boundedness at small scale") {
    Session ses;
    auto e = mf_exp();
    RadiusGrid grid{2.0, 40.0, 12, true};
    for (Complex a : {Complex(1, 0), Complex(-2, 0.5)}) {
        std::vector<double> d;
        for (double r : grid.values()) {
            double r_eff = r;
            double T = proximity(ses, e, TargetKey::inf(), r, &r_eff) +
                       counting(ses, e, TargetKey::inf(), r_eff, false);
            double m = proximity(ses, e, TargetKey::at(a), r_eff);
            double N = counting(ses, e, TargetKey::at(a), r_eff, false);
            d.push_back(T - m - N);
        }
        double lo = *std::min_element(d.begin(), d.end());
        double hi = *std::max_element(d.begin(), d.end());
        CHECK(hi - lo <= 1.0);
    }
}

TEST_CASE("order estimates") {
    Session ses;
    RadiusGrid grid{2.0, 40.0, 24, true};

    auto oe = order_estimate(ses, mf_exp(), grid);
    CHECK(oe.kind == "order");
    CHECK(std::abs(oe.value - 1.0) <= 0.05);

    auto ow = order_estimate(ses, mf_weierstrass(), grid);
    CHECK(std::abs(ow.value - 2.0) <= 0.1);

    auto os = order_estimate(ses, mf_jacobi_sn(0.5), grid);
    CHECK(std::abs(os.value - 2.0) <= 0.1);

    // logarithmic growth must be flagged as exact order zero
    RadiusGrid bigger{2.0, 100.0, 24, true};
    auto orat = order_estimate(ses, mf_rational({{-1, 0}, {1, 0}}, {{1, 0}, {1, 0}}), bigger);
    CHECK(orat.value == 0.0);
}

TEST_CASE("deficiency indices") {
    Session ses;
    RadiusGrid grid{2.0, 40.0, 24, true};

    // e^z omits 0: delta(0) = 1
    auto de = deficiency_indices(ses, mf_exp(), TargetKey::at({0, 0}), grid);
    CHECK(std::abs(de.delta.value - 1.0) <= 0.05);

    // sn: completely ramified value 1 gives theta = 1/2
    auto ds = deficiency_indices(ses, mf_jacobi_sn(0.5), TargetKey::at({1, 0}), grid);
    CHECK(std::abs(ds.theta.value - 0.5) <= 0.1);

    // rational, generic target: no deficiency, no ramification surplus
    // O(1) terms die off like 1/log r, so the grid must reach far out
    auto f = mf_rational({{1, 0}, {0, 0}, {1, 0}}, {{-3, 0}, {1, 0}});
    RadiusGrid big{10.0, 2.0e4, 24, true};
    auto dr = deficiency_indices(ses, f, TargetKey::at({0.37, 0.21}), big);
    CHECK(std::abs(dr.delta.value) <= 0.05);
    CHECK(std::abs(dr.Theta.value) <= 0.05);
}

TEST_CASE("valiron-mohonko identity") {
    Session ses;
    RadiusGrid grid{5.0, 40.0, 16, true};

    RationalInF R{{{1, 0}, {0, 0}, {1, 0}}, {{-2, 0}, {1, 0}}};  // (f^2+1)/(f-2)
    auto rep = verify_valiron_mohonko(ses, mf_exp(), R, grid);
    CHECK(rep.deg == 2);
    CHECK(std::abs(rep.tail_mean - 2.0) <= 0.1);

    RationalInF ident{{{0, 0}, {1, 0}}, {{1, 0}}};  // R = f
    auto rep2 = verify_valiron_mohonko(ses, mf_exp(), ident, grid);
    for (double q : rep2.ratio) CHECK(std::abs(q - 1.0) <= 1e-6);

    RationalInF recip{{{1, 0}}, {{0, 0}, {1, 0}}};  // R = 1/f
    auto rep3 = verify_valiron_mohonko(ses, mf_jacobi_sn(0.5), recip, grid);
    CHECK(std::abs(rep3.tail_mean - 1.0) <= 0.1);
}

TEST_CASE("windowed estimators drop outliers and report windows") {
    std::vector<double> r, q;
    for (int i = 0; i < 24; ++i) {
        r.push_back(2.0 * std::pow(20.0, i / 23.0));
        q.push_back(1.0 + 0.01 * std::sin(i));
    }
    q[20] = 50.0;  // outlier
    auto est = windowed_estimate(r, q, true);
    CHECK(est.kind == "liminf");
    CHECK(std::abs(est.value - 1.0) <= 0.05);
    CHECK(est.dropped_r.size() == 1);
    CHECK(est.sample_count >= 3);
}
